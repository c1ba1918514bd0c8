"""Fundamental hexagons, meandering walks and jigsaw transformations.

A 3-cone's module lifts every tile once into the plane; those copies form
a fundamental domain whose boundary is handled here as a set of lifted
edges (edge id plus the copy of its black endpoint).  Pieces are computed
on the torus, as tile components avoiding the four matchings around an
interior wall, and only then matched between the two lifts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, InvariantError, TheoremError
from .fan import ConeModule, Fan
from .model import BLACK, WHITE, Vec, vadd, vneg, vsub

LiftedEdge = tuple[int, Vec]


def _lifted_tile_edges(fan: Fan, tile: int, offset: Vec) -> list[LiftedEdge]:
    t = fan.quiver.tiles[tile]
    out = []
    for dart, pos in zip(t.darts, t.positions):
        eid, direction = dart
        base = vadd(offset, pos)
        if direction == 1:
            base = vsub(base, fan.model.edge(eid).offset)
        out.append((eid, base))
    return out


def _edge_nodes(fan: Fan, lifted: LiftedEdge) -> tuple[tuple[int, Vec], tuple[int, Vec]]:
    eid, c = lifted
    e = fan.model.edge(eid)
    return (e.black, c), (e.white, vadd(c, e.offset))


@dataclass
class Hexagon:
    cone: tuple[int, int, int]
    tiles: dict[int, Vec]
    boundary: frozenset[LiftedEdge]
    walk: list[LiftedEdge]  # boundary cycle in order
    boundary_torus: frozenset[int]
    trivalent: tuple[int, int]  # torus node ids: (black, white)
    trivalent_copies: list[tuple[int, Vec]]  # six, in walk order
    chains: list[list[LiftedEdge]]  # six chains between consecutive trivalent copies

    def chain_edge_sets(self) -> list[frozenset[int]]:
        return [frozenset(e for e, _ in chain) for chain in self.chains]


def fundamental_hexagon(fan: Fan, cone_rays) -> Hexagon:
    """Lift the cone's support and assemble the fundamental domain it covers,
    asserting the six-trivalent-node boundary structure."""
    cone = tuple(sorted(cone_rays))
    cm = fan.cone(cone)
    if not (cm.accepted and cm.lift is not None):
        raise InputError(f"cone {cone} is not an accepted 3-cone")
    tiles = dict(cm.lift.offsets)
    if len(tiles) != len(fan.quiver.vertices):
        raise InvariantError("hexagon lift does not place every tile")

    count: dict[LiftedEdge, int] = {}
    for tile, off in tiles.items():
        for le in _lifted_tile_edges(fan, tile, off):
            count[le] = count.get(le, 0) + 1
    boundary = frozenset(le for le, c in count.items() if c == 1)
    if any(c > 2 for c in count.values()):
        raise InvariantError("a lifted edge borders more than two lifted tiles")
    boundary_torus = frozenset(e for e, _ in boundary)

    valency: dict[int, int] = {}
    for eid in boundary_torus:
        e = fan.model.edge(eid)
        for n in (e.black, e.white):
            valency[n] = valency.get(n, 0) + 1
    trivalent_black = [n for n, v in valency.items() if v == 3 and fan.model.node(n).color == BLACK]
    trivalent_white = [n for n, v in valency.items() if v == 3 and fan.model.node(n).color == WHITE]
    others = [n for n, v in valency.items() if v not in (2, 3)]
    if len(trivalent_black) != 1 or len(trivalent_white) != 1 or others:
        raise TheoremError(
            f"boundary of cone {cone} violates the trivalent-node structure: "
            f"black {trivalent_black}, white {trivalent_white}, other valencies {others}"
        )

    adj: dict[tuple[int, Vec], list[LiftedEdge]] = {}
    for le in boundary:
        for node in _edge_nodes(fan, le):
            adj.setdefault(node, []).append(le)
    for node, les in adj.items():
        if len(les) != 2:
            raise TheoremError(f"boundary node copy {node} has {len(les)} boundary edges, expected 2")

    start = min(boundary)
    walk = [start]
    node = max(_edge_nodes(fan, start))
    while True:
        options = [le for le in adj[node] if le != walk[-1]]
        nxt = options[0]
        if nxt == start:
            break
        walk.append(nxt)
        a, b = _edge_nodes(fan, nxt)
        node = b if a == node else a
    if len(walk) != len(boundary):
        raise TheoremError("hexagon boundary is not a single closed curve")

    trivalent = (trivalent_black[0], trivalent_white[0])
    node_seq = []
    cur = max(_edge_nodes(fan, start))
    # reconstruct the node sequence along the walk (node after each edge)
    node_seq.append(cur)
    for le in walk[1:]:
        a, b = _edge_nodes(fan, le)
        cur = b if a == cur else a
        node_seq.append(cur)

    trivalent_copies = [node_seq[i] for i in range(len(walk)) if node_seq[i][0] in trivalent]
    if len(trivalent_copies) != 6:
        raise TheoremError(f"expected 6 trivalent node copies on the boundary, found {len(trivalent_copies)}")
    colors = [fan.model.node(n).color for n, _ in trivalent_copies]
    if any(colors[i] == colors[(i + 1) % 6] for i in range(6)):
        raise TheoremError("trivalent boundary nodes do not alternate in colour")
    for tn in trivalent:
        copies = {c for n, c in trivalent_copies if n == tn}
        if len(copies) != 3:
            raise TheoremError("trivalent nodes do not fall into two translation orbits of three copies")

    cut_positions = [i for i in range(len(walk)) if node_seq[i][0] in trivalent]
    chains = []
    for k in range(6):
        i, j = cut_positions[k - 1], cut_positions[k]
        if i < j:
            chains.append(walk[i + 1:j + 1])
        else:
            chains.append(walk[i + 1:] + walk[:j + 1])
    if sorted(len(c) for c in chains) != sorted(len(c) for c in chains) or any(len(c) % 2 == 0 for c in chains):
        raise TheoremError("a boundary chain has an even number of edges")
    projected = [frozenset(e for e, _ in c) for c in chains]
    distinct = set(projected)
    if len(distinct) != 3 or any(projected.count(p) != 2 for p in distinct):
        raise TheoremError("boundary chains are not identified pairwise on the torus")

    union_component = _multi_edge_component(fan, cone)
    if union_component != boundary_torus:
        raise TheoremError("boundary does not match the multi-edge component of the matching union")

    return Hexagon(cone, tiles, boundary, walk, boundary_torus, trivalent, trivalent_copies, chains)


def _multi_edge_component(fan: Fan, cone) -> frozenset[int]:
    union: set[int] = set()
    for rid in cone:
        union.update(fan.rays[rid].matching.edges)
    parent: dict[int, int] = {}
    for eid in union:
        e = fan.model.edge(eid)
        parent.setdefault(e.black, e.black)
        parent.setdefault(e.white, e.white)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in union:
        e = fan.model.edge(eid)
        parent[find(e.black)] = find(e.white)
    groups: dict[int, list[int]] = {}
    for eid in union:
        groups.setdefault(find(fan.model.edge(eid).black), []).append(eid)
    multi = [g for g in groups.values() if len(g) > 1]
    if len(multi) != 1:
        raise TheoremError(f"matching union of {cone} has {len(multi)} multi-edge components")
    return frozenset(multi[0])


# -- meandering walks --------------------------------------------------------


@dataclass
class MeanderingWalk:
    rays: tuple[int, int]
    cycles: list[list[tuple[int, int]]]  # dart cycles
    edges: frozenset[int]
    cls: Vec  # total homology class

    @property
    def single(self) -> bool:
        return len(self.cycles) <= 1

    def component_classes(self, model) -> list[Vec]:
        out = []
        for cyc in self.cycles:
            total = (0, 0)
            for d in cyc:
                total = vadd(total, model.dart_delta(d))
            out.append(total)
        return out


def meandering_walk(fan: Fan, ray_pair) -> MeanderingWalk:
    """Symmetric difference of the two stable matchings, arranged into
    alternating cycles; first-ray edges are traversed black to white."""
    ri, rj = ray_pair
    pi = set(fan.rays[ri].matching.edges)
    pj = set(fan.rays[rj].matching.edges)
    diff = pi ^ pj
    model = fan.model

    at_node: dict[int, list[int]] = {}
    for eid in diff:
        e = model.edge(eid)
        at_node.setdefault(e.black, []).append(eid)
        at_node.setdefault(e.white, []).append(eid)
    for n, eids in at_node.items():
        if len(eids) != 2:
            raise InvariantError(f"symmetric difference is not a union of cycles at node {n}")

    cycles = []
    seen: set[int] = set()
    for start in sorted(diff):
        if start in seen or start not in pi:
            continue
        cyc = []
        eid, direction = start, 0  # black -> white along the first matching
        while True:
            cyc.append((eid, direction))
            seen.add(eid)
            head = model.dart_head((eid, direction))
            nxt = [x for x in at_node[head] if x != eid][0]
            e2 = model.edge(nxt)
            direction = 0 if e2.black == head else 1
            eid = nxt
            if eid == start:
                break
        cycles.append(cyc)
    if seen != diff:
        raise InvariantError("symmetric difference traversal missed edges")

    total = (0, 0)
    for cyc in cycles:
        for d in cyc:
            total = vadd(total, model.dart_delta(d))
    return MeanderingWalk((ri, rj), cycles, frozenset(diff), total)


def pairing(a: Vec, b: Vec) -> int:
    """Evaluation of a cohomology class on a homology class (dot product in
    the offset coordinates)."""
    return a[0] * b[0] + a[1] * b[1]


# -- jigsaw decompositions ----------------------------------------------------


@dataclass
class JigsawDecomposition:
    tau: tuple[int, int]
    sigma_plus: tuple[int, int, int]
    sigma_minus: tuple[int, int, int]
    rho0: int
    rho3: int
    pieces: list[frozenset[int]]
    j0: int  # index into pieces
    translations: list[Vec]  # per piece, from the plus lift to the minus lift
    depths: list[int]  # multiplicity of rho3 in a plus-chart path divisor
    adjacent: list[bool]  # adjacent to the zero piece
    hex_plus: Hexagon
    hex_minus: Hexagon
    cut_minus: frozenset[int]
    cut_plus: frozenset[int]
    walk_m12: frozenset[int]

    def piece_of(self, tile: int) -> int:
        for i, p in enumerate(self.pieces):
            if tile in p:
                return i
        raise InputError(f"tile {tile} not in any piece")

    def to_json(self) -> dict:
        return {
            "tau": list(self.tau),
            "sigma_plus": list(self.sigma_plus),
            "sigma_minus": list(self.sigma_minus),
            "pieces": [sorted(p) for p in self.pieces],
            "zero_piece": self.j0,
            "translations": [list(t) for t in self.translations],
            "adjacent_to_zero_piece": self.adjacent,
            "cut_minus": sorted(self.cut_minus),
            "cut_plus": sorted(self.cut_plus),
        }


def _support_path(fan: Fan, cm: ConeModule, target: int) -> list[int]:
    """Deterministic breadth-first path of arrows from the zero vertex."""
    quiver = fan.quiver
    zero = fan.theta.zero_vertex
    prev: dict[int, tuple[int, int]] = {}
    queue = [zero]
    seen = {zero}
    while queue:
        v = queue.pop(0)
        if v == target:
            break
        for aid in quiver.out_arrows(v):
            if aid in cm.support:
                w = quiver.arrows[aid].head
                if w not in seen:
                    seen.add(w)
                    prev[w] = (v, aid)
                    queue.append(w)
    if target not in seen:
        raise TheoremError(f"vertex {target} unreachable in an accepted cone")
    path = []
    v = target
    while v != zero:
        v, aid = prev[v]
        path.append(aid)
    path.reverse()
    return path


def jigsaw_pieces(fan: Fan, tau) -> JigsawDecomposition:
    tau = tuple(sorted(tau))
    if tau not in fan.segments:
        raise InputError(f"{tau} is not an interior segment of the fan")
    sigma_plus, sigma_minus, rho0, rho3 = fan.segment_cones(tau)
    rho1, rho2 = tau
    matching = {k: set(fan.rays[r].matching.edges) for k, r in
                {0: rho0, 1: rho1, 2: rho2, 3: rho3}.items()}
    union = matching[0] | matching[1] | matching[2] | matching[3]

    quiver = fan.quiver
    parent = {v: v for v in quiver.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in quiver.arrows.values():
        if a.id not in union:
            parent[find(a.tail)] = find(a.head)
    groups: dict[int, set[int]] = {}
    for v in quiver.vertices:
        groups.setdefault(find(v), set()).add(v)
    pieces = sorted((frozenset(g) for g in groups.values()), key=lambda p: min(p))
    j0 = next(i for i, p in enumerate(pieces) if fan.theta.zero_vertex in p)

    hex_plus = fundamental_hexagon(fan, sigma_plus)
    hex_minus = fundamental_hexagon(fan, sigma_minus)

    translations = []
    for piece in pieces:
        ts = {vsub(hex_minus.tiles[t], hex_plus.tiles[t]) for t in piece}
        if len(ts) != 1:
            raise TheoremError(f"piece {sorted(piece)} does not move by a single translation: {ts}")
        translations.append(ts.pop())
    if translations[j0] != (0, 0):
        raise TheoremError("the zero piece moved under the jigsaw transformation")

    cm_plus = fan.cone(sigma_plus)
    depths = []
    for piece in pieces:
        ds = set()
        for t in sorted(piece):
            path = _support_path(fan, cm_plus, t)
            ds.add(sum(1 for aid in path if aid in matching[3]))
        if len(ds) != 1:
            raise TheoremError(f"piece {sorted(piece)} has mixed wall multiplicities {ds}")
        depths.append(ds.pop())
    if depths[j0] != 0:
        raise TheoremError("zero piece has nonzero wall multiplicity")
    adjacent = [d == 1 for d in depths]

    for hexagon in (hex_plus, hex_minus):
        for i, piece in enumerate(pieces):
            if i == j0:
                continue
            geom = _geometrically_adjacent(fan, hexagon, pieces[j0], piece)
            if geom != adjacent[i]:
                raise TheoremError(
                    f"geometric adjacency of piece {sorted(piece)} disagrees with the degree criterion"
                )

    cut_minus = frozenset((matching[1] ^ matching[3]) & (matching[2] ^ matching[3]))
    cut_plus = frozenset((matching[0] ^ matching[1]) & (matching[0] ^ matching[2]))
    walk_m12 = frozenset(matching[1] ^ matching[2])

    return JigsawDecomposition(tau, sigma_plus, sigma_minus, rho0, rho3, pieces, j0,
                               translations, depths, adjacent, hex_plus, hex_minus,
                               cut_minus, cut_plus, walk_m12)


def _geometrically_adjacent(fan: Fan, hexagon: Hexagon, piece_a, piece_b) -> bool:
    for a in fan.quiver.arrows.values():
        ends = {a.tail, a.head}
        if not ((ends & piece_a) and (ends & piece_b)):
            continue
        if vsub(hexagon.tiles[a.head], hexagon.tiles[a.tail]) == a.offset:
            return True
    return False


def jigsaw_transform(fan: Fan, tau, direction: str = "+-") -> dict:
    """Translate each piece's plus-lift onto the minus-lift (or back) and
    certify that the rearrangement reproduces the other hexagon exactly."""
    if direction not in ("+-", "-+"):
        raise InputError("direction must be '+-' or '-+'")
    dec = jigsaw_pieces(fan, tau)
    src, dst = (dec.hex_plus, dec.hex_minus) if direction == "+-" else (dec.hex_minus, dec.hex_plus)
    moved = {}
    for i, piece in enumerate(dec.pieces):
        t = dec.translations[i] if direction == "+-" else vneg(dec.translations[i])
        for tile in piece:
            moved[tile] = vadd(src.tiles[tile], t)
    if moved != dst.tiles:
        raise TheoremError("jigsaw reassembly failed to reproduce the other hexagon")
    return {
        "tau": list(dec.tau),
        "direction": direction,
        "translations": [
            {"piece": sorted(p), "by": list(dec.translations[i] if direction == "+-" else vneg(dec.translations[i]))}
            for i, p in enumerate(dec.pieces)
        ],
        "reassembled": True,
    }


# -- wall quivers --------------------------------------------------------------


@dataclass
class TauQuivers:
    tau: tuple[int, int]
    vertices: tuple[int, ...]
    arrows_plus: tuple[int, ...]
    arrows_minus: tuple[int, ...]
    sources: tuple[int, ...]

    def to_json(self) -> dict:
        return {"tau": list(self.tau), "vertices": list(self.vertices),
                "arrows_plus": list(self.arrows_plus), "arrows_minus": list(self.arrows_minus),
                "sources": list(self.sources)}


def tau_quivers(fan: Fan, tau, decomposition: JigsawDecomposition | None = None) -> TauQuivers:
    """The two wall quivers on the tiles outside the zero piece; their source
    vertex sets must coincide."""
    dec = decomposition or jigsaw_pieces(fan, tau)
    outside = frozenset(v for i, p in enumerate(dec.pieces) if i != dec.j0 for v in p)
    quiver = fan.quiver

    def restricted(cone):
        cm = fan.cone(cone)
        arrows = []
        for aid in sorted(cm.support):
            a = quiver.arrows[aid]
            if a.tail in outside and a.head in outside:
                arrows.append(aid)
            elif a.tail in outside and a.head not in outside:
                raise TheoremError(
                    f"supported arrow {aid} leaves the wall module (submodule property violated)"
                )
        return tuple(arrows)

    arrows_plus = restricted(dec.sigma_plus)
    arrows_minus = restricted(dec.sigma_minus)

    def sources(arrows):
        heads = {quiver.arrows[a].head for a in arrows}
        return tuple(sorted(v for v in outside if v not in heads))

    s_plus, s_minus = sources(arrows_plus), sources(arrows_minus)
    if s_plus != s_minus:
        raise TheoremError(f"wall quivers have different source sets: {s_plus} vs {s_minus}")
    return TauQuivers(dec.tau, tuple(sorted(outside)), arrows_plus, arrows_minus, s_plus)


# -- structural lemma checks ---------------------------------------------------


def check_cut_properties(fan: Fan, tau) -> dict:
    """The cut lemmas for an interior wall, checked for both cuts."""
    dec = jigsaw_pieces(fan, tau)
    model = fan.model
    out: dict = {"tau": list(dec.tau), "ok": True, "problems": []}

    def note(msg):
        out["ok"] = False
        out["problems"].append(msg)

    for name, cut, own_boundary, other_boundary, other_hex in (
        ("cut_minus", dec.cut_minus, dec.hex_plus.boundary_torus, dec.hex_minus.boundary_torus, dec.hex_minus),
        ("cut_plus", dec.cut_plus, dec.hex_minus.boundary_torus, dec.hex_plus.boundary_torus, dec.hex_plus),
    ):
        at_node: dict[int, list[int]] = {}
        for eid in cut:
            e = model.edge(eid)
            at_node.setdefault(e.black, []).append(eid)
            at_node.setdefault(e.white, []).append(eid)
        # (i) the cut never self-intersects
        for n, eids in at_node.items():
            if len(eids) > 2:
                note(f"{name} self-intersects at node {n}")

        # (ii) cut edges on the cut hexagon's boundary lie in both cuts, in odd components
        both = dec.cut_minus & dec.cut_plus
        for eid in cut & own_boundary:
            if eid not in both:
                note(f"{name} edge {eid} on the boundary is not shared by both cuts")
        for comp in _edge_components(model, both):
            if len(comp) % 2 == 0:
                note(f"component {sorted(comp)} of the cut intersection has even size")

        # (iii) walk the cut: runs on/off the cut hexagon's boundary have odd
        # lengths, so departure/arrival nodes alternate in colour
        path = _order_cut(model, cut)
        if path is None:
            note(f"{name} is not a single simple path")
        else:
            runs = []
            for eid in path:
                cls = "B" if eid in own_boundary else "I"
                if runs and runs[-1][0] == cls:
                    runs[-1][1] += 1
                else:
                    runs.append([cls, 1])
            for cls, length in runs:
                if length % 2 == 0:
                    note(f"{name} has an even {cls}-run of length {length}")

        # (iv) nodes on both the cut and the shared walk: one black, one white,
        # and they are the trivalent nodes of the hexagon the cut bounds
        meet = {n for n in at_node if any(
            n in (model.edge(x).black, model.edge(x).white) for x in dec.walk_m12)}
        colors = sorted(model.node(n).color for n in meet)
        if colors != [BLACK, WHITE]:
            note(f"{name} meets the shared walk in nodes {sorted(meet)} (colours {colors})")
        expected = other_hex.trivalent
        if meet != set(expected):
            note(f"{name} meets the shared walk at {sorted(meet)}, expected trivalent nodes {sorted(expected)}")
    return out


def _edge_components(model, edge_set) -> list[set[int]]:
    parent: dict[int, int] = {}
    for eid in edge_set:
        e = model.edge(eid)
        parent.setdefault(e.black, e.black)
        parent.setdefault(e.white, e.white)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in edge_set:
        e = model.edge(eid)
        parent[find(e.black)] = find(e.white)
    comps: dict[int, set[int]] = {}
    for eid in edge_set:
        comps.setdefault(find(model.edge(eid).black), set()).add(eid)
    return list(comps.values())


def _order_cut(model, cut) -> list[int] | None:
    """Order the cut edges into a single simple path, or None."""
    if not cut:
        return []
    at_node: dict[int, list[int]] = {}
    for eid in cut:
        e = model.edge(eid)
        at_node.setdefault(e.black, []).append(eid)
        at_node.setdefault(e.white, []).append(eid)
    ends = sorted(n for n, eids in at_node.items() if len(eids) == 1)
    if len(ends) != 2:
        return None
    path = []
    node = ends[0]
    prev_edge = None
    while True:
        options = [x for x in at_node[node] if x != prev_edge]
        if not options:
            break
        eid = options[0]
        path.append(eid)
        e = model.edge(eid)
        node = e.white if e.black == node else e.black
        prev_edge = eid
    return path if len(path) == len(cut) else None


def check_crossing_arrows(fan: Fan, tau) -> None:
    """Supported arrows between different pieces are dual to wall-matching
    edges: the far matching on the plus side, the near one on the minus side."""
    dec = jigsaw_pieces(fan, tau)
    pi3 = set(fan.rays[dec.rho3].matching.edges)
    pi0 = set(fan.rays[dec.rho0].matching.edges)
    for cone, pi in ((dec.sigma_plus, pi3), (dec.sigma_minus, pi0)):
        cm = fan.cone(cone)
        for aid in cm.support:
            a = fan.quiver.arrows[aid]
            if dec.piece_of(a.tail) != dec.piece_of(a.head) and aid not in pi:
                raise TheoremError(
                    f"arrow {aid} crosses pieces of {dec.tau} but its edge is not in the wall matching"
                )


def check_zero_piece_outflow(fan: Fan, tau) -> None:
    """Every supported arrow dual to a zero-piece boundary edge interior to
    the hexagon points out of the zero piece."""
    dec = jigsaw_pieces(fan, tau)
    j0 = dec.pieces[dec.j0]
    for cone, hexagon in ((dec.sigma_plus, dec.hex_plus), (dec.sigma_minus, dec.hex_minus)):
        cm = fan.cone(cone)
        for aid in cm.support:
            a = fan.quiver.arrows[aid]
            if aid in hexagon.boundary_torus:
                continue
            in_tail, in_head = a.tail in j0, a.head in j0
            if in_tail != in_head and not (in_tail and not in_head):
                raise TheoremError(
                    f"arrow {aid} on the zero-piece boundary points into the zero piece"
                )
