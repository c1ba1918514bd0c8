"""Bipartite tilings of the two-torus and their dual quivers.

A model is stored purely combinatorially: each node carries a
counterclockwise rotation of its incident edges, and each edge carries an
integer wrap offset locating the white endpoint's fundamental-domain copy
relative to the black endpoint's copy.  Node positions, when present, are
rendering hints only; no operation depends on them.

Darts are pairs ``(edge_id, direction)`` with direction 0 for black-to-white
and 1 for white-to-black.  Tiles are the faces of the dart permutation
"clockwise successor of the reversed dart", which traverses each face
counterclockwise; face closure in the universal cover is what validation
checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CoverageError, DimerError, InputError, InvariantError

Vec = tuple[int, int]
Dart = tuple[int, int]

BLACK = "black"
WHITE = "white"


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vneg(a: Vec) -> Vec:
    return (-a[0], -a[1])


@dataclass(frozen=True)
class Node:
    id: int
    color: str
    pos: tuple[float, float] | None = None


@dataclass(frozen=True)
class Edge:
    id: int
    black: int
    white: int
    offset: Vec


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subjects: tuple[int, ...] = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    counts: tuple[int, int, int] | None = None  # (V, E, F)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {"code": v.code, "message": v.message, "subjects": list(v.subjects)}
                for v in self.violations
            ],
            "counts": list(self.counts) if self.counts else None,
        }


@dataclass(frozen=True)
class Tile:
    """A face of the model: its boundary darts with universal-cover offsets.

    ``positions[k]`` is the copy offset of the tail node of ``darts[k]``
    when the tile is lifted with its first dart's tail at copy (0, 0).
    """

    id: int
    darts: tuple[Dart, ...]
    positions: tuple[Vec, ...]

    def dart_position(self, dart: Dart) -> Vec:
        return self.positions[self.darts.index(dart)]


class DimerModel:
    """Immutable torus tiling; construction resolves ids, `validate` checks invariants."""

    def __init__(
        self,
        name: str,
        nodes: list[Node] | tuple[Node, ...],
        edges: list[Edge] | tuple[Edge, ...],
        rotations: dict[int, tuple[int, ...]],
    ):
        self.name = name
        self.nodes = tuple(sorted(nodes, key=lambda n: n.id))
        self.edges = tuple(sorted(edges, key=lambda e: e.id))
        self._node = {n.id: n for n in self.nodes}
        self._edge = {e.id: e for e in self.edges}
        if len(self._node) != len(self.nodes):
            raise InputError("duplicate node ids")
        if len(self._edge) != len(self.edges):
            raise InputError("duplicate edge ids")
        for e in self.edges:
            for end in (e.black, e.white):
                if end not in self._node:
                    raise InputError(f"edge {e.id} references unknown node {end}")
        clean: dict[int, tuple[int, ...]] = {}
        for nid, rot in rotations.items():
            if nid not in self._node:
                raise InputError(f"rotation given for unknown node {nid}")
            for eid in rot:
                if eid not in self._edge:
                    raise InputError(f"rotation at node {nid} lists unknown edge {eid}")
            clean[nid] = tuple(rot)
        self.rotations = clean
        self._tiles: tuple[Tile, ...] | None = None
        self._tile_of: dict[Dart, int] | None = None
        self._quiver = None
        self._validation: ValidationReport | None = None

    # -- basic incidence -------------------------------------------------

    def node(self, nid: int) -> Node:
        return self._node[nid]

    def edge(self, eid: int) -> Edge:
        return self._edge[eid]

    def dart_tail(self, dart: Dart) -> int:
        e = self._edge[dart[0]]
        return e.black if dart[1] == 0 else e.white

    def dart_head(self, dart: Dart) -> int:
        e = self._edge[dart[0]]
        return e.white if dart[1] == 0 else e.black

    def dart_delta(self, dart: Dart) -> Vec:
        off = self._edge[dart[0]].offset
        return off if dart[1] == 0 else vneg(off)

    def darts(self) -> list[Dart]:
        return [(e.id, d) for e in self.edges for d in (0, 1)]

    def dart_from(self, nid: int, eid: int) -> Dart:
        e = self._edge[eid]
        if e.black == nid:
            return (eid, 0)
        if e.white == nid:
            return (eid, 1)
        raise InputError(f"edge {eid} is not incident to node {nid}")

    def incident_edges(self, nid: int) -> list[int]:
        return [e.id for e in self.edges if nid in (e.black, e.white)]

    # -- face tracing ----------------------------------------------------

    def _next_dart(self, dart: Dart) -> Dart:
        head = self.dart_head(dart)
        rot = self.rotations[head]
        i = rot.index(dart[0])
        return self.dart_from(head, rot[i - 1])

    def _rotations_cover_incidences(self) -> bool:
        for n in self.nodes:
            rot = self.rotations.get(n.id)
            if rot is None or sorted(rot) != sorted(self.incident_edges(n.id)):
                return False
        return True

    def tiles(self) -> tuple[Tile, ...]:
        """Faces of the tiling, ordered by their least boundary dart."""
        if self._tiles is None:
            if not self._rotations_cover_incidences():
                raise InvariantError("rotations do not cover the edge incidences")
            seen: set[Dart] = set()
            tiles: list[Tile] = []
            tile_of: dict[Dart, int] = {}
            for start in self.darts():
                if start in seen:
                    continue
                darts: list[Dart] = []
                positions: list[Vec] = []
                pos: Vec = (0, 0)
                d = start
                while True:
                    darts.append(d)
                    positions.append(pos)
                    seen.add(d)
                    tile_of[d] = len(tiles)
                    pos = vadd(pos, self.dart_delta(d))
                    d = self._next_dart(d)
                    if d == start:
                        break
                tiles.append(Tile(len(tiles), tuple(darts), tuple(positions)))
            self._tiles = tuple(tiles)
            self._tile_of = tile_of
        return self._tiles

    def tile_of(self, dart: Dart) -> int:
        self.tiles()
        assert self._tile_of is not None
        return self._tile_of[dart]

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._validation is not None:
            return self._validation
        report = ValidationReport()

        for e in self.edges:
            if self._node[e.black].color != BLACK or self._node[e.white].color != WHITE:
                report.violations.append(
                    Violation("bipartite", f"edge {e.id} does not join a black node to a white node", (e.id,))
                )

        for n in self.nodes:
            deg = len(self.incident_edges(n.id))
            if deg <= 2:
                report.violations.append(
                    Violation("valency", f"node {n.id} has valency {deg} (minimum is 3)", (n.id,))
                )

        rotations_ok = True
        for n in self.nodes:
            rot = self.rotations.get(n.id, ())
            if sorted(rot) != sorted(self.incident_edges(n.id)):
                rotations_ok = False
                report.violations.append(
                    Violation("rotation", f"rotation at node {n.id} does not list its incident edges exactly once", (n.id,))
                )

        parent = {n.id: n.id for n in self.nodes}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.black)] = find(e.white)
        roots = {find(n.id) for n in self.nodes}
        if len(roots) > 1:
            report.violations.append(
                Violation("connected", f"underlying graph has {len(roots)} components", tuple(sorted(roots)))
            )

        if rotations_ok and self.nodes and len(roots) == 1:
            tiles = self.tiles()
            for t in tiles:
                total = (0, 0)
                for d in t.darts:
                    total = vadd(total, self.dart_delta(d))
                if total != (0, 0):
                    report.violations.append(
                        Violation("face-offset", f"tile {t.id} does not close up in the universal cover (offset sum {total})", (t.id,))
                    )
            V, E, F = len(self.nodes), len(self.edges), len(tiles)
            if V - E + F != 0:
                report.violations.append(
                    Violation("euler", f"V - E + F = {V - E + F}, expected 0 for a torus", ())
                )
            report.counts = (V, E, F)

        self._validation = report
        return report

    def require_valid(self) -> None:
        report = self.validate()
        if not report.valid:
            raise InvariantError(
                "invalid model: " + "; ".join(v.message for v in report.violations)
            )


def validate_dimer(model: DimerModel) -> ValidationReport:
    return model.validate()


# -- dual quiver ---------------------------------------------------------


@dataclass(frozen=True)
class Arrow:
    """Dual arrow of an edge: the white endpoint of the edge is on its right."""

    id: int  # equals the dual edge id
    tail: int
    head: int
    offset: Vec


@dataclass(frozen=True)
class QuiverFace:
    node: int
    color: str
    cycle: tuple[int, ...]  # arrow ids, head-to-tail around the dual node


class Quiver:
    def __init__(self, model: DimerModel, tiles: tuple[Tile, ...], arrows: list[Arrow], faces: list[QuiverFace]):
        self.model = model
        self.tiles = tiles
        self.vertices = tuple(t.id for t in tiles)
        self.arrows = {a.id: a for a in arrows}
        self.faces = tuple(faces)
        self._out: dict[int, list[int]] = {v: [] for v in self.vertices}
        self._in: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a in arrows:
            self._out[a.tail].append(a.id)
            self._in[a.head].append(a.id)
        for v in self.vertices:
            self._out[v].sort()
            self._in[v].sort()
        self._white_face_of: dict[int, QuiverFace] = {}
        self._black_face_of: dict[int, QuiverFace] = {}
        for f in faces:
            store = self._white_face_of if f.color == WHITE else self._black_face_of
            for aid in f.cycle:
                if aid in store:
                    raise InvariantError(f"arrow {aid} lies on two {f.color} faces")
                store[aid] = f
        for aid in self.arrows:
            if aid not in self._white_face_of or aid not in self._black_face_of:
                raise InvariantError(f"arrow {aid} is missing from a white or black face cycle")

    def out_arrows(self, v: int) -> list[int]:
        return self._out[v]

    def in_arrows(self, v: int) -> list[int]:
        return self._in[v]

    def relation_paths(self, aid: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The two paths p+ and p- with a.p+ and a.p- the face cycles at arrow `aid`."""
        out = []
        for store in (self._white_face_of, self._black_face_of):
            cyc = store[aid].cycle
            i = cyc.index(aid)
            out.append(cyc[i + 1:] + cyc[:i])
        return out[0], out[1]


def dual_quiver(model: DimerModel) -> Quiver:
    """One vertex per tile, one arrow per edge, faces tagged by dimer node color."""
    model.require_valid()
    if model._quiver is not None:
        return model._quiver
    tiles = model.tiles()

    arrows = []
    for e in model.edges:
        t_tail = model.tile_of((e.id, 1))
        t_head = model.tile_of((e.id, 0))
        p_tail = tiles[t_tail].dart_position((e.id, 1))
        p_head = tiles[t_head].dart_position((e.id, 0))
        offset = vsub(vsub(p_tail, e.offset), p_head)
        arrows.append(Arrow(e.id, t_tail, t_head, offset))
    arr = {a.id: a for a in arrows}

    faces = []
    for n in model.nodes:
        rot = model.rotations[n.id]
        cycle = tuple(rot) if n.color == BLACK else tuple(reversed(rot))
        total = (0, 0)
        for i, aid in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)]
            if arr[aid].head != arr[nxt].tail:
                raise InvariantError(
                    f"face cycle at node {n.id} does not chain head to tail"
                )
            total = vadd(total, arr[aid].offset)
        if total != (0, 0):
            raise InvariantError(f"face cycle at node {n.id} has nonzero offset sum {total}")
        faces.append(QuiverFace(n.id, n.color, cycle))

    q = Quiver(model, tiles, arrows, faces)
    model._quiver = q
    return q


# -- lifts ----------------------------------------------------------------


@dataclass(frozen=True)
class Lift:
    base: int
    offsets: dict[int, Vec]


@dataclass(frozen=True)
class LiftWitness:
    """An undirected cycle in the chosen subquiver whose offsets do not cancel."""

    cycle: tuple[tuple[int, int], ...]  # (arrow id, +1 forward / -1 backward)
    total: Vec


def lift_subquiver(quiver: Quiver, arrow_ids, base: int = 0) -> Lift | LiftWitness:
    """Offsets placing one copy of every vertex, or a witness cycle.

    Every vertex must be reachable from `base` through the chosen arrows,
    ignoring direction; otherwise a CoverageError names a missing vertex.
    """
    chosen = sorted(set(arrow_ids))
    adj: dict[int, list[tuple[int, int, int, Vec]]] = {v: [] for v in quiver.vertices}
    for aid in chosen:
        a = quiver.arrows[aid]
        adj[a.tail].append((a.head, aid, +1, a.offset))
        adj[a.head].append((a.tail, aid, -1, vneg(a.offset)))
    for v in adj:
        adj[v].sort(key=lambda item: (item[0], item[1], item[2]))

    offsets: dict[int, Vec] = {base: (0, 0)}
    parent: dict[int, tuple[int, int, int]] = {}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for w, aid, sign, delta in adj[v]:
            target = vadd(offsets[v], delta)
            if w not in offsets:
                offsets[w] = target
                parent[w] = (v, aid, sign)
                queue.append(w)
            elif offsets[w] != target:
                def steps_down(u: int) -> list[tuple[int, int]]:
                    steps = []
                    while u != base:
                        p, pa, ps = parent[u]
                        steps.append((pa, ps))
                        u = p
                    steps.reverse()
                    return steps

                up_w = [(a2, -s2) for a2, s2 in reversed(steps_down(w))]
                cycle = tuple(steps_down(v) + [(aid, sign)] + up_w)
                total = vsub(target, offsets[w])
                return LiftWitness(cycle, total)
    missing = [v for v in quiver.vertices if v not in offsets]
    if missing:
        raise CoverageError(
            f"vertices {missing} are unreachable from base {base} through the chosen arrows"
        )
    return Lift(base, offsets)


# -- duality round trip ----------------------------------------------------


def reconstruct_dimer(quiver: Quiver) -> DimerModel:
    """Rebuild the tiling from the quiver's faces (inverse of `dual_quiver`)."""
    arr = quiver.arrows
    nodes = [Node(f.node, f.color) for f in quiver.faces]

    pos_in_face: dict[str, dict[int, dict[int, Vec]]] = {WHITE: {}, BLACK: {}}
    for f in quiver.faces:
        cum: Vec = (0, 0)
        table = {}
        for aid in f.cycle:
            table[aid] = cum
            cum = vadd(cum, arr[aid].offset)
        pos_in_face[f.color][f.node] = table

    edges = []
    rotations: dict[int, list[int]] = {f.node: [] for f in quiver.faces}
    for aid in sorted(arr):
        black_face = quiver._black_face_of[aid]
        white_face = quiver._white_face_of[aid]
        p_b = pos_in_face[BLACK][black_face.node][aid]
        p_w = pos_in_face[WHITE][white_face.node][aid]
        offset = vadd(vsub(p_b, p_w), arr[aid].offset)
        edges.append(Edge(aid, black_face.node, white_face.node, offset))
    for f in quiver.faces:
        cyc = f.cycle if f.color == BLACK else tuple(reversed(f.cycle))
        rotations[f.node] = list(cyc)
    return DimerModel(quiver.model.name + "-reconstructed", nodes, edges,
                      {n: tuple(r) for n, r in rotations.items()})


def models_equal_up_to_gauge(a: DimerModel, b: DimerModel) -> bool:
    """Same combinatorial map and the same torus covering, allowing each node
    to sit in a different fundamental-domain copy (offset gauge)."""
    if [(n.id, n.color) for n in a.nodes] != [(n.id, n.color) for n in b.nodes]:
        return False
    if [(e.id, e.black, e.white) for e in a.edges] != [(e.id, e.black, e.white) for e in b.edges]:
        return False
    for n in a.nodes:
        ra, rb = a.rotations[n.id], b.rotations[n.id]
        if len(ra) != len(rb):
            return False
        if not any(rb == ra[i:] + ra[:i] for i in range(len(ra))):
            return False
    gauge: dict[int, Vec] = {}
    start = a.nodes[0].id
    gauge[start] = (0, 0)
    queue = [start]
    adj: dict[int, list[Edge]] = {n.id: [] for n in a.nodes}
    for e in a.edges:
        adj[e.black].append(e)
        adj[e.white].append(e)
    while queue:
        v = queue.pop(0)
        for e in adj[v]:
            diff = vsub(b.edge(e.id).offset, e.offset)  # = gauge(white) - gauge(black)
            w = e.white if v == e.black else e.black
            expected = vadd(gauge[v], diff) if v == e.black else vsub(gauge[v], diff)
            if w not in gauge:
                gauge[w] = expected
                queue.append(w)
            elif gauge[w] != expected:
                return False
    return len(gauge) == len(a.nodes)
