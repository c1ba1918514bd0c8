"""SVG and TikZ drawings of the marked triangulation.

Output is deterministic for a fixed fan and report: triangles, segment
labels and boxed point labels are emitted in canonical order with fixed
formatting, so files are byte-stable across runs.
"""

from __future__ import annotations

from .errors import InputError
from .fan import Fan
from .recipe import RecipeReport

SCALE = 60
MARGIN = 40


def _label(vertices) -> str:
    return ",".join(str(v) for v in vertices)


def _bounds(fan: Fan):
    xs = [r.point[0] for r in fan.rays]
    ys = [r.point[1] for r in fan.rays]
    return min(xs), max(xs), min(ys), max(ys)


def render(fan: Fan, report: RecipeReport | None = None, format: str = "svg") -> str:
    if format == "svg":
        return render_svg(fan, report)
    if format == "tikz":
        return render_tikz(fan, report)
    raise InputError(f"unknown render format '{format}'")


def render_svg(fan: Fan, report: RecipeReport | None = None) -> str:
    x0, x1, y0, y1 = _bounds(fan)

    def pt(p):
        return (MARGIN + (p[0] - x0) * SCALE, MARGIN + (y1 - p[1]) * SCALE)

    width = MARGIN * 2 + (x1 - x0) * SCALE
    height = MARGIN * 2 + (y1 - y0) * SCALE
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        '<g fill="none" stroke="black" stroke-width="1.5">',
    ]
    drawn = set()
    for tri, _ in fan.triangles:
        for i in range(3):
            a, b = sorted((tri[i], tri[(i + 1) % 3]))
            if (a, b) in drawn:
                continue
            drawn.add((a, b))
            pa, pb = pt(fan.rays[a].point), pt(fan.rays[b].point)
            out.append(f'<line x1="{pa[0]}" y1="{pa[1]}" x2="{pb[0]}" y2="{pb[1]}"/>')
    out.append("</g>")

    if report is not None:
        out.append('<g font-family="sans-serif" font-size="12" text-anchor="middle">')
        for seg in sorted(report.segments):
            pa = fan.rays[seg[0]].point
            pb = fan.rays[seg[1]].point
            mx, my = pt(((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2))
            text = _label(report.segments[seg])
            w = 8 * len(text) + 6
            out.append(f'<rect x="{mx - w / 2}" y="{my - 9}" width="{w}" height="16" fill="white" stroke="black" stroke-width="0.8"/>')
            out.append(f'<text x="{mx}" y="{my + 4}">{text}</text>')
        for rid in sorted(report.points):
            px, py = pt(fan.rays[rid].point)
            text = _label(report.points[rid])
            w = max(18, 8 * len(text) + 8)
            out.append(f'<circle cx="{px}" cy="{py}" r="{w / 2}" fill="white" stroke="black"/>')
            out.append(f'<text x="{px}" y="{py + 4}">{text}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_tikz(fan: Fan, report: RecipeReport | None = None) -> str:
    out = ["\\begin{tikzpicture}"]
    drawn = set()
    for tri, _ in fan.triangles:
        for i in range(3):
            a, b = sorted((tri[i], tri[(i + 1) % 3]))
            if (a, b) in drawn:
                continue
            drawn.add((a, b))
            pa, pb = fan.rays[a].point, fan.rays[b].point
            out.append(f"\\draw ({pa[0]},{pa[1]}) -- ({pb[0]},{pb[1]});")
    if report is not None:
        for seg in sorted(report.segments):
            pa = fan.rays[seg[0]].point
            pb = fan.rays[seg[1]].point
            mx = (pa[0] + pb[0]) / 2
            my = (pa[1] + pb[1]) / 2
            out.append(
                f"\\node[rectangle,draw,fill=white,inner sep=1pt] at ({mx},{my}) "
                f"{{\\tiny {_label(report.segments[seg])}}};"
            )
        for rid in sorted(report.points):
            p = fan.rays[rid].point
            out.append(
                f"\\node[circle,draw,fill=white,inner sep=1pt] at ({p[0]},{p[1]}) "
                f"{{\\tiny {_label(report.points[rid])}}};"
            )
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"
