"""Stable matchings, torus-fixed cone modules and the triangulated polygon.

For a 0-generated weight vector, stability of a 0/1 module is directed
reachability of every vertex from the distinguished vertex through the
supported arrows.  The fan is built candidate-first: every unimodular
triple of rays whose module passes stability, the relation closure and a
consistent lift is accepted, and the accepted set is then verified to tile
the polygon exactly.  The global verification guards the construction
unconditionally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, InvariantError, RayMultiplicityError, TheoremError, TilingError
from .matchings import (CharacteristicPolygon, PerfectMatching, characteristic_polygon,
                        check_consistency, enumerate_matchings)
from .model import DimerModel, Lift, Quiver, Vec, dual_quiver, lift_subquiver, vsub


@dataclass(frozen=True)
class StabilityParameter:
    zero_vertex: int
    weights: dict[int, Fraction]

    def __post_init__(self):
        if sum(self.weights.values()) != 0:
            raise InputError("stability weights must sum to zero")
        for v, w in self.weights.items():
            if v != self.zero_vertex and w <= 0:
                raise InputError(
                    f"weight at vertex {v} is not positive: only 0-generated parameters are supported"
                )

    @staticmethod
    def default(n_vertices: int, zero_vertex: int = 0, vertex_ids=None) -> "StabilityParameter":
        ids = list(vertex_ids) if vertex_ids is not None else list(range(n_vertices))
        weights = {v: Fraction(1) for v in ids}
        weights[zero_vertex] = Fraction(-(len(ids) - 1))
        return StabilityParameter(zero_vertex, weights)


def is_stable_support(quiver: Quiver, support, theta: StabilityParameter) -> bool:
    """True iff every vertex is reachable from the zero vertex along the support."""
    support = set(support)
    reached = {theta.zero_vertex}
    frontier = [theta.zero_vertex]
    while frontier:
        v = frontier.pop()
        for aid in quiver.out_arrows(v):
            if aid in support:
                w = quiver.arrows[aid].head
                if w not in reached:
                    reached.add(w)
                    frontier.append(w)
    return len(reached) == len(quiver.vertices)


@dataclass(frozen=True)
class Ray:
    id: int
    point: Vec
    matching: PerfectMatching


@dataclass
class ConeModule:
    """Arrow support of the torus-fixed module of a cone, with its checks."""

    rays: tuple[int, ...]
    support: frozenset[int]
    accepted: bool
    rejection: str | None = None
    lift: Lift | None = None

    def sinks(self, quiver: Quiver):
        return sorted(v for v in quiver.vertices
                      if not any(a in self.support for a in quiver.out_arrows(v)))

    def sources(self, quiver: Quiver):
        return sorted(v for v in quiver.vertices
                      if not any(a in self.support for a in quiver.in_arrows(v)))


@dataclass
class Fan:
    model: DimerModel
    quiver: Quiver
    theta: StabilityParameter
    polygon: CharacteristicPolygon
    rays: list[Ray]
    triangles: list[tuple[tuple[int, int, int], ConeModule]]
    segments: list[tuple[int, int]] = field(default_factory=list)  # interior, ray-id pairs
    interior_rays: list[int] = field(default_factory=list)

    def ray_by_point(self, point: Vec) -> Ray:
        for r in self.rays:
            if r.point == point:
                return r
        raise InputError(f"no ray at lattice point {point}")

    def triangles_containing(self, ray_ids) -> list[tuple[int, int, int]]:
        wanted = set(ray_ids)
        return [t for t, _ in self.triangles if wanted <= set(t)]

    def cone(self, ray_ids) -> ConeModule:
        key = tuple(sorted(ray_ids))
        for t, cm in self.triangles:
            if t == key:
                return cm
        return cone_module(self, key)

    def segment_cones(self, segment: tuple[int, int]):
        """For an interior segment: (sigma_plus, sigma_minus, rho0, rho3).

        The plus side is the adjacent triangle whose opposite ray has the
        lexicographically smaller lattice point; this fixes one orientation
        for jigsaw moves and wall degrees.
        """
        seg = tuple(sorted(segment))
        tris = self.triangles_containing(seg)
        if len(tris) != 2:
            raise InputError(f"segment {seg} is not interior (lies in {len(tris)} triangles)")
        opp = []
        for t in tris:
            (extra,) = set(t) - set(seg)
            opp.append(extra)
        points = {r.id: r.point for r in self.rays}
        if points[opp[0]] > points[opp[1]]:
            tris = [tris[1], tris[0]]
            opp = [opp[1], opp[0]]
        return tris[0], tris[1], opp[0], opp[1]

    def wall_relation(self, segment: tuple[int, int]) -> tuple[int, int]:
        """(alpha, beta) with v(rho0) + v(rho3) = alpha*v(rho1) + beta*v(rho2)
        for segment = (rho1, rho2); alpha + beta = 2 (affine relation)."""
        _, _, r0, r3 = self.segment_cones(segment)
        p = {r.id: r.point for r in self.rays}
        s1, s2 = sorted(segment)
        # Affinely: (p0 - p1) + (p3 - p1) = beta * (p2 - p1), alpha = 2 - beta.
        d = (p[r0][0] + p[r3][0] - 2 * p[s1][0], p[r0][1] + p[r3][1] - 2 * p[s1][1])
        e = (p[s2][0] - p[s1][0], p[s2][1] - p[s1][1])
        if d[0] * e[1] - d[1] * e[0] != 0:
            raise InvariantError(f"wall relation at {segment} is degenerate")
        if e[0] != 0:
            beta, rem = divmod(d[0], e[0])
        else:
            beta, rem = divmod(d[1], e[1])
        if rem != 0 or (beta * e[0], beta * e[1]) != d:
            raise InvariantError(f"wall relation at {segment} is not integral")
        alpha = 2 - beta
        return int(alpha), int(beta)

    def to_json(self) -> dict:
        return {
            "theta": {"zero_vertex": self.theta.zero_vertex,
                      "weights": {str(v): str(w) for v, w in sorted(self.theta.weights.items())}},
            "rays": [{"id": r.id, "point": list(r.point), "matching": list(r.matching.edges)}
                     for r in self.rays],
            "triangles": [list(t) for t, _ in self.triangles],
            "segments": [list(s) for s in self.segments],
            "interior_rays": self.interior_rays,
        }


def stable_matchings(model: DimerModel, theta: StabilityParameter,
                     matchings: list[PerfectMatching] | None = None) -> dict[Vec, PerfectMatching]:
    """The stable matchings keyed by lattice point; exactly one per occupied point."""
    quiver = dual_quiver(model)
    if matchings is None:
        matchings = enumerate_matchings(model)
    polygon = characteristic_polygon(model, matchings)
    shift = min(pm.height for pm in matchings)

    stable: dict[Vec, list[PerfectMatching]] = {}
    for pm in matchings:
        support = {a for a in quiver.arrows if a not in set(pm.edges)}
        if is_stable_support(quiver, support, theta):
            stable.setdefault(vsub(pm.height, shift), []).append(pm)

    problems = []
    for point in polygon.points:
        n = len(stable.get(point, []))
        if n != 1:
            problems.append((point, n))
    if problems:
        raise RayMultiplicityError(
            "lattice points with stable-matching multiplicity != 1: "
            + ", ".join(f"{p}: {n}" for p, n in problems)
        )
    return {p: pms[0] for p, pms in stable.items()}


def _unimodular(p0: Vec, p1: Vec, p2: Vec) -> bool:
    d = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
    return abs(d) == 1


class _FanContext:
    """What cone_module needs: the quiver, theta and the rays."""

    def __init__(self, model, quiver, theta, rays):
        self.model = model
        self.quiver = quiver
        self.theta = theta
        self.rays = rays
        self._ray_by_id = {r.id: r for r in rays}

    def ray(self, rid: int) -> Ray:
        return self._ray_by_id[rid]


def cone_module(ctx, ray_ids) -> ConeModule:
    """Support of the module of a cone; 3-cones must pass stability, the
    relation closure and a consistent lift of the support to be accepted."""
    quiver = ctx.quiver
    key = tuple(sorted(ray_ids))
    excluded: set[int] = set()
    for rid in key:
        excluded.update(ctx.ray(rid).matching.edges)
    support = frozenset(a for a in quiver.arrows if a not in excluded)

    if len(key) < 3:
        return ConeModule(key, support, True)

    if not is_stable_support(quiver, support, ctx.theta):
        return ConeModule(key, support, False, "unstable: some vertex unreachable from the zero vertex")
    for aid in quiver.arrows:
        pp, pm = quiver.relation_paths(aid)
        if all(a in support for a in pp) != all(a in support for a in pm):
            return ConeModule(key, support, False, f"relation at arrow {aid} not respected")
    lift = lift_subquiver(quiver, support, ctx.theta.zero_vertex)
    if not isinstance(lift, Lift):
        return ConeModule(key, support, False, "support does not lift consistently")
    if len(set(lift.offsets.items())) != len(quiver.vertices):
        return ConeModule(key, support, False, "lifted tile copies are not distinct")
    return ConeModule(key, support, True, lift=lift)


@dataclass
class TriangulationReport:
    ok: bool
    triangle_count: int
    expected_count: int
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "triangles": self.triangle_count,
                "expected": self.expected_count, "witnesses": self.witnesses}


def verify_triangulation(polygon: CharacteristicPolygon, triangles: list[tuple[Vec, Vec, Vec]],
                         expected_count: int) -> TriangulationReport:
    """Exact tiling check: positively oriented unimodular triangles, directed
    interior edges matched in pairs, boundary steps covered exactly once,
    counts and area consistent, no overlap at any triangle centroid."""
    witnesses: dict = {"duplicate_edges": [], "unmatched_edges": [], "boundary_gaps": [],
                       "boundary_extra": [], "overlaps": [], "count": None, "area": None}
    ok = True

    oriented = []
    for tri in triangles:
        a, b, c = tri
        det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        oriented.append((a, b, c) if det > 0 else (a, c, b))

    directed: dict[tuple[Vec, Vec], int] = {}
    for a, b, c in oriented:
        for u, v in ((a, b), (b, c), (c, a)):
            directed[(u, v)] = directed.get((u, v), 0) + 1
    for edge, count in directed.items():
        if count > 1:
            ok = False
            witnesses["duplicate_edges"].append([list(edge[0]), list(edge[1])])

    corners = polygon.corners
    boundary_steps = []
    for i in range(len(corners)):
        a, b = corners[i], corners[(i + 1) % len(corners)]
        dx, dy = b[0] - a[0], b[1] - a[1]
        from math import gcd
        g = gcd(abs(dx), abs(dy))
        step = (dx // g, dy // g)
        cur = a
        for _ in range(g):
            nxt = (cur[0] + step[0], cur[1] + step[1])
            boundary_steps.append((cur, nxt))
            cur = nxt
    boundary_set = set(boundary_steps)

    for edge, count in directed.items():
        rev = (edge[1], edge[0])
        if edge in boundary_set:
            continue
        if directed.get(rev, 0) != count:
            ok = False
            witnesses["unmatched_edges"].append([list(edge[0]), list(edge[1])])
    for step in boundary_steps:
        if directed.get(step, 0) != 1:
            ok = False
            witnesses["boundary_gaps"].append([list(step[0]), list(step[1])])
    for edge in directed:
        if (edge[1], edge[0]) in boundary_set:
            ok = False
            witnesses["boundary_extra"].append([list(edge[0]), list(edge[1])])

    area2 = sum((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
                for a, b, c in oriented)
    witnesses["area"] = {"triangles": area2, "polygon": polygon.area2()}
    if area2 != polygon.area2():
        ok = False
    witnesses["count"] = {"triangles": len(triangles), "expected": expected_count}
    if len(triangles) != expected_count:
        ok = False

    def contains(tri, px, py, scale):
        a, b, c = tri
        signs = []
        for u, v in ((a, b), (b, c), (c, a)):
            s = (v[0] - u[0]) * (py - u[1] * scale) - (v[1] - u[1]) * (px - u[0] * scale)
            signs.append(s)
        return all(s > 0 for s in signs)

    for i, tri in enumerate(oriented):
        cx = tri[0][0] + tri[1][0] + tri[2][0]
        cy = tri[0][1] + tri[1][1] + tri[2][1]
        inside = [j for j, other in enumerate(oriented) if contains(other, cx, cy, 3)]
        if inside != [i]:
            ok = False
            witnesses["overlaps"].append({"triangle": i, "covered_by": inside})

    return TriangulationReport(ok, len(triangles), expected_count, witnesses)


def build_fan(model: DimerModel, theta: StabilityParameter | None = None) -> Fan:
    """Rays from stable matchings, triangles from accepted unimodular triples,
    then global tiling verification."""
    model.require_valid()
    consistency = check_consistency(model)
    if not consistency.ok:
        raise InvariantError("model is not consistent; the fan is only defined for consistent models")
    quiver = dual_quiver(model)
    if theta is None:
        theta = StabilityParameter.default(len(quiver.vertices), vertex_ids=quiver.vertices)
    if theta.zero_vertex not in quiver.vertices:
        raise InputError(f"zero vertex {theta.zero_vertex} is not a quiver vertex")

    matchings = enumerate_matchings(model)
    polygon = characteristic_polygon(model, matchings)
    stable = stable_matchings(model, theta, matchings)
    rays = [Ray(i, p, stable[p]) for i, p in enumerate(sorted(stable))]
    ctx = _FanContext(model, quiver, theta, rays)

    triangles = []
    from itertools import combinations
    for trio in combinations(rays, 3):
        pts = [r.point for r in trio]
        if not _unimodular(*pts):
            continue
        cm = cone_module(ctx, [r.id for r in trio])
        if cm.accepted:
            triangles.append((tuple(sorted(r.id for r in trio)), cm))
    triangles.sort(key=lambda item: item[0])

    report = verify_triangulation(
        polygon,
        [tuple(ctx.ray(rid).point for rid in t) for t, _ in triangles],
        expected_count=len(quiver.vertices),
    )
    if not report.ok:
        raise TilingError("accepted cones do not triangulate the polygon", report.witnesses)

    seg_count: dict[tuple[int, int], int] = {}
    for t, _ in triangles:
        for pair in combinations(t, 2):
            seg_count[tuple(sorted(pair))] = seg_count.get(tuple(sorted(pair)), 0) + 1
    segments = sorted(s for s, c in seg_count.items() if c == 2)
    interior_pts = set(polygon.interior)
    interior_rays = sorted(r.id for r in rays if r.point in interior_pts)

    fan = Fan(model, quiver, theta, polygon, rays, triangles, segments, interior_rays)
    _check_component_counts(fan)
    return fan


def _check_component_counts(fan: Fan) -> None:
    """The matching union of every accepted 3-cone has exactly one connected
    component with more than one edge."""
    model = fan.model
    for t, cm in fan.triangles:
        union: set[int] = set()
        for rid in t:
            union.update(fan.rays[rid].matching.edges)
        parent = {}
        for eid in union:
            e = model.edge(eid)
            parent.setdefault(e.black, e.black)
            parent.setdefault(e.white, e.white)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in union:
            e = model.edge(eid)
            parent[find(e.black)] = find(e.white)
        sizes: dict[int, int] = {}
        for eid in union:
            root = find(model.edge(eid).black)
            sizes[root] = sizes.get(root, 0) + 1
        multi = [r for r, s in sizes.items() if s > 1]
        if len(multi) != 1:
            raise TheoremError(
                f"matching union of cone {t} has {len(multi)} multi-edge components, expected 1"
            )
