"""Hexagonal tilings of abelian quotients and the classical marking oracles.

The character lattice is realised as the plane modulo the kernel of the
weight map, with the three translation directions e1, e2, -e1-e2.  The
classical recipes and the monomial jigsaw act on monomial exponent triples
and are used to cross-validate the generic pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .errors import InputError, InvariantError, TheoremError
from .fan import Fan, StabilityParameter, build_fan
from .integers import hnf_rows, integer_kernel, reduce_mod_lattice, solve_2x2
from .jigsaw import jigsaw_pieces
from .model import BLACK, WHITE, DimerModel, Edge, Node, Vec, vadd, vsub
from .recipe import mark_lattice_points, mark_line_segments

Char = tuple[int, ...]
Triple = tuple[int, int, int]


@dataclass(frozen=True)
class AbelianGroupData:
    """Diagonal abelian action on three coordinates, as cyclic generators."""

    generators: tuple[tuple[int, Triple], ...]  # (order, weights of x, y, z)

    def __post_init__(self):
        if not self.generators:
            raise InputError("at least one cyclic generator is required")
        for r, (a, b, c) in self.generators:
            if r < 1:
                raise InputError(f"generator order {r} is not positive")
            if (a + b + c) % r != 0:
                raise InputError(f"weights {(a, b, c)} do not sum to 0 mod {r}")

    @property
    def order(self) -> int:
        return prod(r for r, _ in self.generators)

    def weight(self, axis: int) -> Char:
        return tuple(w[axis] % r for r, w in self.generators)

    def char_add(self, x: Char, y: Char) -> Char:
        return tuple((a + b) % r for (r, _), a, b in zip(self.generators, x, y))

    def char_scale(self, k: int, x: Char) -> Char:
        return tuple((k * a) % r for (r, _), a in zip(self.generators, x))

    def monomial_char(self, exponents: Triple) -> Char:
        out = tuple(0 for _ in self.generators)
        for axis, e in enumerate(exponents):
            out = self.char_add(out, self.char_scale(e, self.weight(axis)))
        return out

    @property
    def trivial(self) -> Char:
        return tuple(0 for _ in self.generators)

    def label(self) -> str:
        return ";".join(f"1/{r}({a},{b},{c})" for r, (a, b, c) in self.generators)

    @staticmethod
    def parse(text: str) -> "AbelianGroupData":
        gens = []
        for part in text.split(";"):
            try:
                head, tail = part.split(":")
                a, b, c = (int(x) for x in tail.split(","))
                gens.append((int(head), (a, b, c)))
            except ValueError:
                raise InputError(f"cannot parse group spec '{part}' (expected r:a,b,c)") from None
        return AbelianGroupData(tuple(gens))


def _kernel_lattice(group: AbelianGroupData) -> list[list[int]]:
    """Basis of {(m, n) : m*wt(x) + n*wt(y) = 0 in the character group}."""
    k = len(group.generators)
    rows = []
    for i, (r, (a, b, _)) in enumerate(group.generators):
        row = [a, b] + [0] * k
        row[2 + i] = r
        rows.append(row)
    kern = integer_kernel(rows)
    basis = hnf_rows([v[:2] for v in kern])
    if len(basis) != 2:
        raise InvariantError("kernel of the weight map is not a rank-2 lattice")
    return basis


@dataclass
class McKayModel:
    group: AbelianGroupData
    model: DimerModel
    kbasis: tuple[Vec, Vec]
    reps: list[Vec]
    tile_char: dict[int, Char] = field(default_factory=dict)
    char_tile: dict[Char, int] = field(default_factory=dict)

    def coords(self, vector: Vec) -> Vec:
        h1, h2 = self.kbasis
        sol = solve_2x2(h1[0], h2[0], h1[1], h2[1], vector[0], vector[1])
        if sol is None or sol[0].denominator != 1 or sol[1].denominator != 1:
            raise InvariantError(f"{vector} is not in the kernel lattice")
        return (int(sol[0]), int(sol[1]))


def mckay_dimer(group: AbelianGroupData) -> McKayModel:
    """The hexagonal tiling with one tile per character; the zero tile is the
    trivial character."""
    basis = _kernel_lattice(group)
    h1, h2 = (basis[0][0], basis[0][1]), (basis[1][0], basis[1][1])
    if h1[0] * h2[1] - h1[1] * h2[0] < 0:
        h2 = (-h2[0], -h2[1])
    det = h1[0] * h2[1] - h1[1] * h2[0]
    if det != group.order:
        raise InputError(
            f"weights generate a subgroup of index {group.order // det if det else 0}: "
            "the action is not faithful on the character group"
        )

    def rep_of(v: Vec) -> Vec:
        return tuple(reduce_mod_lattice(list(v), [list(h1), list(h2)]))

    reps: list[Vec] = []
    seen = set()
    stack = [(0, 0)]
    while stack:
        v = stack.pop()
        r = rep_of(v)
        if r in seen:
            continue
        seen.add(r)
        reps.append(r)
        for d in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            stack.append(vadd(r, d))
    reps.sort()
    if len(reps) != group.order:
        raise InvariantError("coset enumeration does not match the group order")
    idx = {r: i for i, r in enumerate(reps)}
    n = len(reps)

    mck = McKayModel(group, None, (h1, h2), reps)  # type: ignore[arg-type]

    def unit_pos(p: tuple[Fraction, Fraction]) -> tuple[float, float]:
        sol = solve_2x2(h1[0], h2[0], h1[1], h2[1], p[0], p[1])
        assert sol is not None
        return (round(float(sol[0] % 1), 6), round(float(sol[1] % 1), 6))

    nodes = []
    for i, v in enumerate(reps):
        nodes.append(Node(i, BLACK, unit_pos((v[0] + Fraction(2, 3), v[1] + Fraction(1, 3)))))
    for i, v in enumerate(reps):
        nodes.append(Node(n + i, WHITE, unit_pos((v[0] + Fraction(1, 3), v[1] + Fraction(2, 3)))))

    edges = []
    e1, e2 = (1, 0), (0, 1)
    for i, v in enumerate(reps):
        edges.append(Edge(i, i, n + i, (0, 0)))  # diagonal edge of the unit square at v
    for i, v in enumerate(reps):
        target = rep_of(vadd(v, e2))
        off = mck.coords(vsub(target, vadd(v, e2)))
        edges.append(Edge(n + i, idx[target], n + i, off))  # crosses the x-arrow
    for i, v in enumerate(reps):
        target = rep_of(vsub(v, e1))
        off = mck.coords(vsub(target, vsub(v, e1)))
        edges.append(Edge(2 * n + i, idx[target], n + i, off))  # crosses the y-arrow

    rotations: dict[int, tuple[int, ...]] = {}
    for i, v in enumerate(reps):
        rotations[n + i] = (i, n + i, 2 * n + i)  # white: diagonal, x-type, y-type
    for i, v in enumerate(reps):
        x_edge = n + idx[rep_of(vsub(v, e2))]
        y_edge = 2 * n + idx[rep_of(vadd(v, e1))]
        rotations[i] = (i, x_edge, y_edge)  # black, counterclockwise

    model = DimerModel(f"mckay-{group.label()}", nodes, edges, rotations)
    mck.model = model

    report = model.validate()
    if not report.valid:
        raise InvariantError("constructed tiling is invalid: "
                             + "; ".join(v.message for v in report.violations))
    for i, v in enumerate(reps):
        tile = model.tile_of((i, 0))
        ch = tuple((v[0] * group.weight(0)[k] + v[1] * group.weight(1)[k]) % r
                   for k, (r, _) in enumerate(group.generators))
        if tile in mck.tile_char:
            raise InvariantError("two cosets map to the same tile")
        mck.tile_char[tile] = ch
        mck.char_tile[ch] = tile
    if mck.tile_char.get(0) != group.trivial:
        raise InvariantError("tile 0 is not the trivial character")
    return mck


# -- junior coordinates --------------------------------------------------------


@dataclass
class JuniorContext:
    """Dictionary between the model's polygon and exponent space."""

    mck: McKayModel
    fan: Fan
    axis_rays: tuple[int, int, int]  # ray ids of the x, y, z corners
    mbasis: list[list[int]]  # basis of the invariant-monomial exponent lattice

    def scaled_point(self, point: Vec) -> Triple:
        """Image of a polygon lattice point, scaled by the group order."""
        r = self.mck.group.order
        px = self.fan.rays[self.axis_rays[0]].point
        py = self.fan.rays[self.axis_rays[1]].point
        pz = self.fan.rays[self.axis_rays[2]].point
        sol = solve_2x2(px[0] - pz[0], py[0] - pz[0], px[1] - pz[1], py[1] - pz[1],
                        point[0] - pz[0], point[1] - pz[1])
        if sol is None:
            raise InvariantError("corner rays are collinear")
        u, v = sol
        out = (r * u, r * v, r * (1 - u - v))
        if any(x.denominator != 1 for x in out):
            raise InvariantError(f"{point} does not map to the exponent lattice")
        return tuple(int(x) for x in out)


def junior_context(mck: McKayModel, fan: Fan) -> JuniorContext:
    n = mck.group.order
    type_sets = {
        0: frozenset(range(n, 2 * n)),      # x-type edges
        1: frozenset(range(2 * n, 3 * n)),  # y-type edges
        2: frozenset(range(n)),             # diagonal (z-type) edges
    }
    axis_rays = []
    for axis in (0, 1, 2):
        hits = [r.id for r in fan.rays if frozenset(r.matching.edges) == type_sets[axis]]
        if len(hits) != 1:
            raise TheoremError(f"axis matching for coordinate {axis} is not a single ray")
        axis_rays.append(hits[0])
    corner_ids = {fan.ray_by_point(p).id for p in fan.polygon.corners}
    if set(axis_rays) != corner_ids:
        raise TheoremError("axis rays do not coincide with the polygon corners")

    k = len(mck.group.generators)
    rows = []
    for i, (r, (a, b, c)) in enumerate(mck.group.generators):
        row = [a, b, c] + [0] * k
        row[3 + i] = r
        rows.append(row)
    kern = integer_kernel(rows)
    mbasis = hnf_rows([v[:3] for v in kern])
    if len(mbasis) != 3:
        raise InvariantError("invariant exponent lattice does not have rank 3")
    return JuniorContext(mck, fan, tuple(axis_rays), mbasis)


def segment_normal(jc: JuniorContext, tau) -> Triple:
    """Primitive invariant exponent vector normal to the wall, positive on the
    plus-side cone."""
    sigma_plus, _, rho0, _ = jc.fan.segment_cones(tuple(sorted(tau)))
    q1 = jc.scaled_point(jc.fan.rays[tau[0]].point)
    q2 = jc.scaled_point(jc.fan.rays[tau[1]].point)
    rows = [
        [sum(b[i] * q[i] for i in range(3)) for b in jc.mbasis]
        for q in (q1, q2)
    ]
    kern = integer_kernel(rows)
    if len(kern) != 1:
        raise InvariantError(f"normal space of {tau} has rank {len(kern)}")
    y = kern[0]
    m = tuple(sum(y[j] * jc.mbasis[j][i] for j in range(3)) for i in range(3))
    q0 = jc.scaled_point(jc.fan.rays[rho0].point)
    s = sum(m[i] * q0[i] for i in range(3))
    if s == 0:
        raise InvariantError(f"normal of {tau} vanishes on the plus cone")
    if s < 0:
        m = tuple(-x for x in m)
    return m  # type: ignore[return-value]


def classical_segment_marking(jc: JuniorContext, tau) -> Char:
    """Character of the numerator (equivalently denominator) of the invariant
    monomial normal to the wall."""
    m = segment_normal(jc, tau)
    group = jc.mck.group
    num = tuple(max(x, 0) for x in m)
    den = tuple(max(-x, 0) for x in m)
    cn, cd = group.monomial_char(num), group.monomial_char(den)
    if cn != cd:
        raise InvariantError("numerator and denominator of an invariant monomial differ in character")
    return cn


# -- monomial G-graphs -----------------------------------------------------------


def chart_ggraph(jc: JuniorContext, cone_rays) -> dict[Char, Triple]:
    """Monomial representative of each character on a chart: the path divisor
    with every non-corner ray variable set to 1."""
    from .bundles import path_divisor
    fan = jc.fan
    group = jc.mck.group
    out: dict[Char, Triple] = {}
    for v in fan.quiver.vertices:
        _, div = path_divisor(fan, cone_rays, v)
        exps = tuple(div[jc.axis_rays[axis]] for axis in (0, 1, 2))
        ch = jc.mck.tile_char[v]
        if group.monomial_char(exps) != ch:
            raise TheoremError(
                f"chart monomial {exps} of tile {v} is not in its character space"
            )
        if ch in out:
            raise TheoremError(f"character {ch} has two chart monomials")
        out[ch] = exps
    return out


def is_staircase(gg: dict[Char, Triple]) -> bool:
    exps = set(gg.values())
    for e in exps:
        for axis in range(3):
            if e[axis] > 0:
                down = tuple(e[i] - (1 if i == axis else 0) for i in range(3))
                if down not in exps:
                    return False
    return True


def socle_chars(group: AbelianGroupData, gg: dict[Char, Triple]) -> set[Char]:
    exps = set(gg.values())
    out = set()
    for ch, e in gg.items():
        if all(tuple(e[i] + (1 if i == axis else 0) for i in range(3)) not in exps
               for axis in range(3)):
            out.add(ch)
    return out


def classical_point_marking(jc: JuniorContext, ray_id: int) -> set[Char]:
    """Characters in the socle of the monomial chart at every torus-fixed
    point over the interior lattice point."""
    group = jc.mck.group
    cones = [t for t, _ in jc.fan.triangles if ray_id in t]
    marks: set[Char] | None = None
    for cone in cones:
        gg = chart_ggraph(jc, cone)
        s = socle_chars(group, gg)
        marks = s if marks is None else marks & s
    return marks or set()


def nakamura_gigsaw(gg: dict[Char, Triple], m: Triple) -> dict[Char, Triple]:
    """Multiply each monomial by the highest power of the invariant monomial
    that stays polynomial."""
    if all(x >= 0 for x in m):
        raise InputError("at least one exponent of the wall monomial must be negative")
    out = {}
    for ch, e in gg.items():
        d = min(e[i] // (-m[i]) for i in range(3) if m[i] < 0)
        out[ch] = tuple(e[i] + d * m[i] for i in range(3))
    return out


def gigsaw_power(e: Triple, m: Triple) -> int:
    return min(e[i] // (-m[i]) for i in range(3) if m[i] < 0)


# -- the cross-check ---------------------------------------------------------------


@dataclass
class CrosscheckReport:
    group: str
    ok: bool
    point_diffs: list[dict] = field(default_factory=list)
    segment_diffs: list[dict] = field(default_factory=list)
    gigsaw_diffs: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"group": self.group, "ok": self.ok, "point_diffs": self.point_diffs,
                "segment_diffs": self.segment_diffs, "gigsaw_diffs": self.gigsaw_diffs}


def crosscheck_recipes(group: AbelianGroupData, theta: StabilityParameter | None = None) -> CrosscheckReport:
    """Generic recipe against the classical one, and combinatorial jigsaw
    moves against the monomial jigsaw, on the group's hexagonal tiling."""
    mck = mckay_dimer(group)
    fan = build_fan(mck.model, theta)
    jc = junior_context(mck, fan)
    report = CrosscheckReport(group.label(), True)

    points = mark_lattice_points(fan)
    for rid, vertices in points.items():
        generic = {mck.tile_char[v] for v in vertices}
        classical = classical_point_marking(jc, rid)
        if generic != classical:
            report.ok = False
            report.point_diffs.append({"ray": rid, "generic": sorted(generic),
                                       "classical": sorted(classical)})

    segments = mark_line_segments(fan)
    for seg, vertices in segments.items():
        generic = {mck.tile_char[v] for v in vertices}
        classical = {classical_segment_marking(jc, seg)}
        if generic != classical:
            report.ok = False
            report.segment_diffs.append({"segment": list(seg), "generic": sorted(generic),
                                         "classical": sorted(classical)})

    for seg in fan.segments:
        dec = jigsaw_pieces(fan, seg)
        m = segment_normal(jc, seg)
        gg_plus = chart_ggraph(jc, dec.sigma_plus)
        gg_minus = chart_ggraph(jc, dec.sigma_minus)
        if not (is_staircase(gg_plus) and is_staircase(gg_minus)):
            report.ok = False
            report.gigsaw_diffs.append({"segment": list(seg), "problem": "chart is not a staircase"})
            continue
        moved = nakamura_gigsaw(gg_plus, m)
        if moved != gg_minus:
            report.ok = False
            report.gigsaw_diffs.append({"segment": list(seg), "problem": "monomial jigsaw mismatch"})
            continue
        w_plane = (m[0] - m[2], m[1] - m[2])
        w = mck.coords(w_plane)
        for i, piece in enumerate(dec.pieces):
            for tile in piece:
                d = gigsaw_power(gg_plus[mck.tile_char[tile]], m)
                if d != dec.depths[i]:
                    report.ok = False
                    report.gigsaw_diffs.append(
                        {"segment": list(seg), "tile": tile,
                         "problem": f"monomial power {d} != wall multiplicity {dec.depths[i]}"})
                if dec.translations[i] != (d * w[0], d * w[1]):
                    report.ok = False
                    report.gigsaw_diffs.append(
                        {"segment": list(seg), "tile": tile,
                         "problem": f"translation {dec.translations[i]} != {d} * {w}"})
    return report
