"""Perfect matchings, height changes, the characteristic polygon and
zig-zag consistency.

Height changes are evaluated exactly: the crossing rule defines a 1-cochain
on the dual quiver which is a cocycle precisely because both edge sets are
perfect matchings, so its value depends only on the homology class of the
crossing loop.  Consistency is decided by reducing the universal-cover
intersection pattern modulo the period lattices of the zig-zag paths, which
is finite and exact; no window truncation is involved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateModelError, InputError, InvariantError
from .integers import solve_2x2
from .model import BLACK, WHITE, DimerModel, Quiver, Vec, dual_quiver, vadd, vneg, vsub

Dart = tuple[int, int]

# Fixed unimodular identification of superposition-cycle classes with height
# changes: rotate by -90 degrees.  Exercised by the internal cross-check.
def chain_to_height(v: Vec) -> Vec:
    return (v[1], -v[0])


@dataclass(frozen=True)
class PerfectMatching:
    edges: tuple[int, ...]
    height: Vec | None = None  # relative to the model's reference matching

    def __contains__(self, edge_id: int) -> bool:
        return edge_id in set(self.edges)


def is_perfect_matching(model: DimerModel, edges) -> bool:
    edges = set(edges)
    covered: set[int] = set()
    for eid in edges:
        e = model.edge(eid)
        if e.black in covered or e.white in covered:
            return False
        covered.update((e.black, e.white))
    return len(covered) == len(model.nodes)


def enumerate_matchings(model: DimerModel) -> list[PerfectMatching]:
    """All perfect matchings, lexicographically ordered on sorted edge ids.

    The first element is the reference matching used for height caching.
    """
    model.require_valid()
    node_ids = [n.id for n in model.nodes]
    incident = {nid: sorted(model.incident_edges(nid)) for nid in node_ids}

    found: list[tuple[int, ...]] = []
    chosen: list[int] = []
    covered: set[int] = set()

    def extend() -> None:
        free = [nid for nid in node_ids if nid not in covered]
        if not free:
            found.append(tuple(sorted(chosen)))
            return
        n = free[0]
        for eid in incident[n]:
            e = model.edge(eid)
            other = e.white if e.black == n else e.black
            if other in covered or other == n:
                continue
            covered.update((e.black, e.white))
            chosen.append(eid)
            extend()
            chosen.pop()
            covered.difference_update((e.black, e.white))

    extend()
    if not found:
        raise DegenerateModelError(f"degenerate model: '{model.name}' admits no perfect matching")
    found.sort()
    reference = found[0]
    out = []
    for edges in found:
        h = height_change(model, edges, reference)
        out.append(PerfectMatching(edges, h))
    return out


# -- height change ---------------------------------------------------------


def _crossing_weight(model: DimerModel, pi: set[int], pi_ref: set[int], eid: int) -> int:
    """Height step when a loop crosses edge `eid` along its dual arrow.

    Along the arrow the white endpoint is on the right, so an edge of the
    first matching counts -1 and an edge of the reference counts +1.
    """
    w = 0
    if eid in pi:
        w -= 1
    if eid in pi_ref:
        w += 1
    return w


def height_change(model: DimerModel, pm, pm_ref, base: int = 0) -> Vec:
    """(h_x, h_y) of `pm` against `pm_ref` via loops of class (1,0) and (0,1)."""
    pi = set(pm.edges if isinstance(pm, PerfectMatching) else pm)
    ref = set(pm_ref.edges if isinstance(pm_ref, PerfectMatching) else pm_ref)
    if not is_perfect_matching(model, pi) or not is_perfect_matching(model, ref):
        raise InputError("height_change requires two perfect matchings of the model")
    quiver = dual_quiver(model)

    pos: dict[int, Vec] = {base: (0, 0)}
    acc: dict[int, int] = {base: 0}
    adj: dict[int, list[tuple[int, int, int]]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows.values():
        adj[a.tail].append((a.head, a.id, +1))
        adj[a.head].append((a.tail, a.id, -1))
    for v in adj:
        adj[v].sort()
    tree: set[int] = set()
    queue = [base]
    while queue:
        v = queue.pop(0)
        for w, aid, sign in adj[v]:
            if w in pos:
                continue
            arrow = quiver.arrows[aid]
            delta = arrow.offset if sign > 0 else vneg(arrow.offset)
            pos[w] = vadd(pos[v], delta)
            acc[w] = acc[v] + sign * _crossing_weight(model, pi, ref, aid)
            tree.add(aid)
            queue.append(w)

    cycles: list[tuple[Vec, int]] = []
    for a in quiver.arrows.values():
        if a.id in tree:
            continue
        cls = vsub(vadd(pos[a.tail], a.offset), pos[a.head])
        val = acc[a.tail] + _crossing_weight(model, pi, ref, a.id) - acc[a.head]
        cycles.append((cls, val))

    pair = None
    for i, (c1, _) in enumerate(cycles):
        for j in range(i + 1, len(cycles)):
            c2 = cycles[j][0]
            if c1[0] * c2[1] - c1[1] * c2[0] != 0:
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise InvariantError("edge offsets do not span the torus homology")
    (c1, s1), (c2, s2) = cycles[pair[0]], cycles[pair[1]]
    sol = solve_2x2(c1[0], c1[1], c2[0], c2[1], s1, s2)
    assert sol is not None
    hx, hy = sol
    if hx.denominator != 1 or hy.denominator != 1:
        raise InvariantError("height functional is not integral")
    h = (int(hx), int(hy))
    for cls, val in cycles:
        if cls[0] * h[0] + cls[1] * h[1] != val:
            raise InvariantError("height functional is inconsistent across cycles")
    return h


def superposition_class(model: DimerModel, pm, pm_ref) -> Vec:
    """Total homology class of the cycles of the symmetric difference,
    oriented so first-matching edges run black to white."""
    pi = set(pm.edges if isinstance(pm, PerfectMatching) else pm)
    ref = set(pm_ref.edges if isinstance(pm_ref, PerfectMatching) else pm_ref)
    total = (0, 0)
    for eid in pi - ref:
        total = vadd(total, model.edge(eid).offset)
    for eid in ref - pi:
        total = vsub(total, model.edge(eid).offset)
    return total


# -- characteristic polygon --------------------------------------------------


def convex_hull(points: list[Vec]) -> list[Vec]:
    """Counterclockwise hull corners (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if cross != 0:
        return False
    dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])
    return 0 <= dot <= (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2


@dataclass
class CharacteristicPolygon:
    reference: int  # index of the reference matching in canonical order
    points: dict[Vec, list[int]]  # lattice point -> matching indices
    corners: list[Vec]  # convex hull, counterclockwise from the lex-least corner
    boundary: list[Vec]  # occupied non-corner hull points
    interior: list[Vec]

    def classify(self, p: Vec) -> str:
        if p in self.corners:
            return "corner"
        if p in self.boundary:
            return "boundary"
        if p in self.interior:
            return "interior"
        raise InputError(f"{p} is not an occupied lattice point")

    def area2(self) -> int:
        """Twice the lattice area of the hull."""
        c = self.corners
        return abs(sum(c[i][0] * c[(i + 1) % len(c)][1] - c[(i + 1) % len(c)][0] * c[i][1]
                       for i in range(len(c))))

    def to_json(self) -> dict:
        return {
            "reference": self.reference,
            "points": [{"point": list(p), "matchings": ids} for p, ids in sorted(self.points.items())],
            "corners": [list(p) for p in self.corners],
            "interior": [list(p) for p in sorted(self.interior)],
        }


def characteristic_polygon(model: DimerModel, matchings: list[PerfectMatching] | None = None) -> CharacteristicPolygon:
    """Height changes of all matchings, translated so the lexicographically
    least occupied lattice point is the origin."""
    if matchings is None:
        matchings = enumerate_matchings(model)
    raw: dict[Vec, list[int]] = {}
    for i, pm in enumerate(matchings):
        assert pm.height is not None
        raw.setdefault(pm.height, []).append(i)
    shift = min(raw)
    points = {vsub(p, shift): ids for p, ids in raw.items()}
    hull = convex_hull(list(points))
    least = min(hull)
    k = hull.index(least)
    corners = hull[k:] + hull[:k]
    boundary = []
    interior = []
    for p in sorted(points):
        if p in corners:
            continue
        on_hull = any(
            _on_segment(p, corners[i], corners[(i + 1) % len(corners)])
            for i in range(len(corners))
        )
        (boundary if on_hull else interior).append(p)
    return CharacteristicPolygon(0, points, corners, boundary, interior)


# -- zig-zag paths -----------------------------------------------------------


@dataclass(frozen=True)
class ZigZag:
    """Cyclic dart sequence turning maximally right at white nodes and
    maximally left at black nodes, with its homology class."""

    darts: tuple[Dart, ...]
    cls: Vec

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.darts)


def _zigzag_next(model: DimerModel, dart: Dart) -> Dart:
    head = model.dart_head(dart)
    rot = model.rotations[head]
    i = rot.index(dart[0])
    if model.node(head).color == WHITE:
        e2 = rot[(i + 1) % len(rot)]  # maximal right turn
    else:
        e2 = rot[i - 1]  # maximal left turn
    return model.dart_from(head, e2)


def zigzag_paths(model: DimerModel) -> list[ZigZag]:
    model.require_valid()
    seen: set[Dart] = set()
    out = []
    for start in model.darts():
        if start in seen:
            continue
        darts = []
        cls = (0, 0)
        d = start
        while True:
            darts.append(d)
            seen.add(d)
            cls = vadd(cls, model.dart_delta(d))
            d = _zigzag_next(model, d)
            if d == start:
                break
        out.append(ZigZag(tuple(darts), cls))
    return out


# -- consistency -------------------------------------------------------------


def _lifted_edge_positions(model: DimerModel, zz: ZigZag) -> list[Vec]:
    """Copy offset of each traversed edge (copy of its black endpoint) along
    one period of the lift starting at copy (0, 0) of the first tail node."""
    pos: list[Vec] = []
    cur = (0, 0)
    for (eid, direction) in zz.darts:
        off = model.edge(eid).offset
        pos.append(cur if direction == 0 else vsub(cur, off))
        cur = vadd(cur, model.dart_delta((eid, direction)))
    return pos


def _is_multiple(v: Vec, t: Vec) -> bool:
    """v in Z*t for t != 0."""
    if t == (0, 0):
        return v == (0, 0)
    if v == (0, 0):
        return True
    if v[0] * t[1] - v[1] * t[0] != 0:
        return False
    k = v[0] // t[0] if t[0] else v[1] // t[1]
    return (k * t[0], k * t[1]) == v


@dataclass
class ConsistencyReport:
    ok: bool
    zigzags: list[ZigZag]
    trivial: list[int] = field(default_factory=list)
    self_intersections: list[dict] = field(default_factory=list)
    double_crossings: list[dict] = field(default_factory=list)
    method: str = "exact reduction modulo the period lattice of each zig-zag lift"

    def to_json(self) -> dict:
        return {
            "consistent": self.ok,
            "zigzag_classes": [list(z.cls) for z in self.zigzags],
            "trivial": self.trivial,
            "self_intersections": self.self_intersections,
            "double_crossings": self.double_crossings,
            "method": self.method,
        }


def check_consistency(model: DimerModel) -> ConsistencyReport:
    """Zig-zag consistency: no trivial class, no self-intersection of a lift,
    no two lifts sharing same-direction crossings more than once."""
    model.require_valid()
    zigzags = zigzag_paths(model)
    report = ConsistencyReport(True, zigzags)

    for i, z in enumerate(zigzags):
        if z.cls == (0, 0):
            report.trivial.append(i)
    if report.trivial:
        report.ok = False

    positions = [_lifted_edge_positions(model, z) for z in zigzags]

    for zi, z in enumerate(zigzags):
        if z.cls == (0, 0):
            continue
        pos = positions[zi]
        for i in range(len(z.darts)):
            for j in range(i + 1, len(z.darts)):
                if z.darts[i][0] != z.darts[j][0]:
                    continue
                if _is_multiple(vsub(pos[j], pos[i]), z.cls):
                    report.ok = False
                    report.self_intersections.append(
                        {"zigzag": zi, "edge": z.darts[i][0], "darts": [i, j]}
                    )

    for zi in range(len(zigzags)):
        for zj in range(zi, len(zigzags)):
            z1, z2 = zigzags[zi], zigzags[zj]
            if z1.cls == (0, 0) or z2.cls == (0, 0):
                continue
            t1, t2 = z1.cls, z2.cls
            det = t1[0] * t2[1] - t1[1] * t2[0]
            matches = []
            for i, (e1, d1) in enumerate(z1.darts):
                for j, (e2, d2) in enumerate(z2.darts):
                    if e1 != e2:
                        continue
                    if zi == zj and i >= j:
                        continue
                    matches.append((i, j, vsub(positions[zj][j], positions[zi][i]), 1 - 2 * d1))
            if det != 0:
                groups: dict[tuple, list[tuple]] = {}
                for i, j, v, sign in matches:
                    sol = solve_2x2(t1[0], t2[0], t1[1], t2[1], v[0], v[1])
                    assert sol is not None
                    alpha, beta = sol
                    key = (alpha - int(alpha // 1), beta - int(beta // 1))
                    groups.setdefault(key, []).append((i, j, sign))
                for key, grp in groups.items():
                    for sign in (+1, -1):
                        same = [g for g in grp if g[2] == sign]
                        if len(same) > 1:
                            report.ok = False
                            report.double_crossings.append(
                                {"zigzags": [zi, zj], "matches": [(i, j) for i, j, _ in same]}
                            )
            else:
                for i, j, v, sign in matches:
                    if zi == zj and _is_multiple(v, t1):
                        continue  # already counted as a self-intersection
                    report.ok = False
                    report.double_crossings.append(
                        {"zigzags": [zi, zj], "matches": [(i, j)], "parallel": True}
                    )
    return report
