"""Marking of interior lattice points and line segments by quiver vertices,
and the classification of vertices it induces.

A vertex marks an interior point when it is a sink of the support quiver of
every triangle around that point (for 0-generated weights the one-dimensional
socle test reduces to the sink test).  A vertex marks an interior segment
when it is a common source of the two wall quivers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TheoremError
from .fan import Fan
from .jigsaw import JigsawDecomposition, jigsaw_pieces, tau_quivers

Segment = tuple[int, int]


def mark_lattice_points(fan: Fan) -> dict[int, tuple[int, ...]]:
    """Interior ray id -> sorted vertices that are sinks around it."""
    out: dict[int, tuple[int, ...]] = {}
    for rid in fan.interior_rays:
        candidates: set[int] | None = None
        for tri, cm in fan.triangles:
            if rid not in tri:
                continue
            sinks = set(cm.sinks(fan.quiver))
            candidates = sinks if candidates is None else candidates & sinks
        marks = sorted(candidates or ())
        if not marks:
            raise TheoremError(f"interior lattice point (ray {rid}) is marked by no vertex")
        out[rid] = tuple(marks)
    return out


def mark_line_segments(fan: Fan, decompositions: dict[Segment, JigsawDecomposition] | None = None
                       ) -> dict[Segment, tuple[int, ...]]:
    """Interior segment -> the common source vertices of its wall quivers."""
    out: dict[Segment, tuple[int, ...]] = {}
    for seg in fan.segments:
        dec = decompositions.get(seg) if decompositions else None
        tq = tau_quivers(fan, seg, dec)
        if not tq.sources:
            raise TheoremError(f"interior segment {seg} is marked by no vertex")
        out[seg] = tq.sources
    return out


POINTS = "marks-points"
ONE_SEGMENT = "marks-one-segment"
MANY_SEGMENTS = "marks-many-segments"
ZERO = "zero-vertex"
UNMARKED = "unmarked"


@dataclass
class RecipeReport:
    fan: Fan
    points: dict[int, tuple[int, ...]]  # interior ray id -> vertices
    segments: dict[Segment, tuple[int, ...]]
    classes: dict[int, str]  # vertex -> classification
    supports: dict[int, dict]  # vertex -> predicted support description
    counts: dict[tuple[int, int], int]  # (vertex, interior ray id) -> n(i, rho)
    warnings: list[str] = field(default_factory=list)

    def vertices_marking_point(self, rid: int) -> tuple[int, ...]:
        return self.points.get(rid, ())

    def to_json(self) -> dict:
        return {
            "points": [{"ray": rid, "point": list(self.fan.rays[rid].point), "vertices": list(v)}
                       for rid, v in sorted(self.points.items())],
            "segments": [{"rays": list(seg), "vertices": list(v)}
                         for seg, v in sorted(self.segments.items())],
            "classes": {str(v): c for v, c in sorted(self.classes.items())},
            "supports": {str(v): s for v, s in sorted(self.supports.items())},
            "warnings": self.warnings,
        }


def classify_vertices(fan: Fan,
                      points: dict[int, tuple[int, ...]] | None = None,
                      segments: dict[Segment, tuple[int, ...]] | None = None) -> RecipeReport:
    if points is None:
        points = mark_lattice_points(fan)
    if segments is None:
        segments = mark_line_segments(fan)

    zero = fan.theta.zero_vertex
    marked_points: dict[int, list[int]] = {}
    for rid, vs in points.items():
        for v in vs:
            marked_points.setdefault(v, []).append(rid)
    marked_segments: dict[int, list[Segment]] = {}
    for seg, vs in segments.items():
        for v in vs:
            marked_segments.setdefault(v, []).append(seg)

    if zero in marked_points or zero in marked_segments:
        raise TheoremError("the zero vertex marks a point or segment")

    counts: dict[tuple[int, int], int] = {}
    for seg, vs in segments.items():
        for v in vs:
            for rid in seg:
                if rid in fan.interior_rays:
                    counts[(v, rid)] = counts.get((v, rid), 0) + 1

    classes: dict[int, str] = {}
    supports: dict[int, dict] = {}
    warnings: list[str] = []
    for v in fan.quiver.vertices:
        if v == zero:
            classes[v] = ZERO
            supports[v] = {"kind": "dualising-locus"}
            continue
        pts = sorted(marked_points.get(v, []))
        segs = sorted(marked_segments.get(v, []))
        if pts and segs:
            warnings.append(f"vertex {v} marks both points {pts} and segments {segs}")
        if pts:
            classes[v] = POINTS
            supports[v] = {"kind": "divisor-union", "rays": pts}
            if not _rays_connected(fan, pts):
                raise TheoremError(f"divisor union of vertex {v} is not connected: rays {pts}")
        elif len(segs) == 1:
            classes[v] = ONE_SEGMENT
            supports[v] = {"kind": "curve", "segment": list(segs[0])}
        elif len(segs) >= 2:
            classes[v] = MANY_SEGMENTS
            rays = sorted(rid for rid in fan.interior_rays if counts.get((v, rid), 0) >= 2)
            supports[v] = {"kind": "divisor-union", "rays": rays, "conjectural": True}
        else:
            classes[v] = UNMARKED
            supports[v] = {"kind": "none"}

    return RecipeReport(fan, points, segments, classes, supports, counts, warnings)


def _rays_connected(fan: Fan, rids) -> bool:
    rids = set(rids)
    if len(rids) <= 1:
        return True
    segs = [s for s in fan.segments if set(s) <= rids]
    reached = {min(rids)}
    changed = True
    while changed:
        changed = False
        for a, b in segs:
            if (a in reached) != (b in reached):
                reached.update((a, b))
                changed = True
    return reached == rids


def check_sink_marks_triangle(fan: Fan, report: RecipeReport) -> None:
    """Every nonzero sink of a triangle's support quiver marks one of the
    triangle's own segments or points."""
    if len(fan.quiver.vertices) == 1:
        return
    for tri, cm in fan.triangles:
        for v in cm.sinks(fan.quiver):
            if v == fan.theta.zero_vertex:
                raise TheoremError(f"zero vertex is a sink of cone {tri}")
            marked = False
            for rid in tri:
                if v in report.points.get(rid, ()):
                    marked = True
            for seg in fan.segments:
                if set(seg) <= set(tri) and v in report.segments.get(seg, ()):
                    marked = True
            if not marked:
                raise TheoremError(f"sink {v} of cone {tri} marks no face of that cone")
