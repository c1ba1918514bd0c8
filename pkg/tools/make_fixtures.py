"""Build the shipped fixture files.

c3 and conifold are written directly from their standard combinatorial data.
longhex is produced by dualizing a transcription of the reference drawing of
its quiver (vertex coordinates in a 400pt-periodic fundamental domain, one
arrow per tiling edge with its wrap offset); the script re-derives the
tiling from the drawing, then checks that the package's own dual recovers
the transcribed quiver exactly, tile ids included.

Run from the repository root:  python tools/make_fixtures.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dimertools.io import parse_dimer, serialize_dimer
from dimertools.model import DimerModel, Edge, Node, dual_quiver

OUT = Path(__file__).resolve().parent.parent / "src" / "dimertools" / "fixtures"

PERIOD = 400

# Quiver vertex coordinates (pt) in the fundamental square [0, 400)^2.
LONGHEX_VERTICES = {
    0: (26, 26), 1: (350, 302), 2: (273, 179), 3: (308, 144), 4: (108, 344),
    5: (344, 108), 6: (67, 185), 7: (150, 102), 8: (267, 385), 9: (191, 261),
}

# edge id -> (tail, head, wrap offset, ray labels of the dual edge's divisor)
# The labels use the drawing's numbering of the ten lattice points and are
# frozen again in the test suite as the expected arrow divisors.
LONGHEX_ARROWS = {
    0: (1, 0, (1, 1), (3, 8, 9, 10)),
    1: (1, 2, (0, 0), (6,)),
    2: (3, 2, (0, 0), (4,)),
    3: (0, 4, (0, -1), (1, 2, 6)),
    4: (5, 0, (1, 0), (1, 2, 6, 7, 8, 9, 10)),
    5: (0, 6, (0, 0), (3, 4)),
    6: (7, 0, (0, 0), (5, 7, 8, 9)),
    7: (0, 8, (-1, -1), (4, 5)),
    8: (2, 9, (0, 0), (3, 4, 5, 7, 8, 9, 10)),
    9: (2, 4, (0, -1), (1, 5, 6, 7, 8, 9)),
    10: (2, 4, (1, 0), (1, 2, 3, 8, 9, 10)),
    11: (3, 5, (0, 0), (1, 9)),
    12: (4, 1, (-1, 0), (4, 5, 7)),
    13: (4, 3, (-1, 0), (5, 6, 7)),
    14: (4, 3, (0, 1), (2, 3, 10)),
    15: (4, 6, (0, 0), (1, 6, 7, 9)),
    16: (4, 7, (0, 1), (3, 4, 10)),
    17: (4, 8, (0, 0), (1, 2, 9, 10)),
    18: (5, 4, (0, -1), (4, 5, 6, 7, 8)),
    19: (5, 4, (1, 0), (2, 3, 4, 8, 10)),
    20: (6, 5, (-1, 0), (5,)),
    21: (6, 9, (0, 0), (2, 10)),
    22: (7, 2, (0, 0), (2,)),
    23: (8, 5, (0, 1), (3,)),
    24: (8, 9, (0, 0), (6, 7)),
    25: (9, 1, (0, 0), (1, 2)),
    26: (9, 4, (0, 0), (3, 4, 5, 8)),
    27: (9, 7, (0, 0), (1, 6)),
}


def c3() -> DimerModel:
    nodes = [Node(0, "black", (0.666667, 0.333333)), Node(1, "white", (0.333333, 0.666667))]
    edges = [Edge(0, 0, 1, (0, 0)), Edge(1, 0, 1, (-1, 0)), Edge(2, 0, 1, (-1, -1))]
    return DimerModel("c3", nodes, edges, {0: (0, 1, 2), 1: (0, 1, 2)})


def conifold() -> DimerModel:
    nodes = [Node(0, "black", (0.25, 0.25)), Node(1, "white", (0.75, 0.75))]
    edges = [Edge(0, 0, 1, (0, 0)), Edge(1, 0, 1, (-1, 0)),
             Edge(2, 0, 1, (-1, -1)), Edge(3, 0, 1, (0, -1))]
    return DimerModel("conifold", nodes, edges, {0: (0, 1, 2, 3), 1: (0, 1, 2, 3)})


def longhex() -> DimerModel:
    verts = LONGHEX_VERTICES
    arrows = {eid: (t, h, off) for eid, (t, h, off, _) in LONGHEX_ARROWS.items()}

    # darts: (edge id, forward?) with geometric direction at the vertex they leave
    darts_at: dict[int, list[tuple[int, bool]]] = {v: [] for v in verts}
    direction = {}
    for eid, (t, h, off) in arrows.items():
        vec = (verts[h][0] + PERIOD * off[0] - verts[t][0],
               verts[h][1] + PERIOD * off[1] - verts[t][1])
        direction[(eid, True)] = vec
        direction[(eid, False)] = (-vec[0], -vec[1])
        darts_at[t].append((eid, True))
        darts_at[h].append((eid, False))
    for v in darts_at:
        darts_at[v].sort(key=lambda d: math.atan2(direction[d][1], direction[d][0]))

    def head_of(dart):
        eid, fwd = dart
        return arrows[eid][1] if fwd else arrows[eid][0]

    def next_dart(dart):
        v = head_of(dart)
        rev = (dart[0], not dart[1])
        ring = darts_at[v]
        i = ring.index(rev)
        return ring[i - 1]  # clockwise successor: trace with the face on the left

    faces = []
    face_of = {}
    seen = set()
    for eid in sorted(arrows):
        for fwd in (True, False):
            start = (eid, fwd)
            if start in seen:
                continue
            cyc, pos, cur = [], [], (0, 0)
            d = start
            while True:
                cyc.append(d)
                pos.append(cur)
                seen.add(d)
                face_of[d] = len(faces)
                off = arrows[d[0]][2]
                step = off if d[1] else (-off[0], -off[1])
                cur = (cur[0] + step[0], cur[1] + step[1])
                d = next_dart(d)
                if d == start:
                    break
            assert cur == (0, 0), f"face through {start} does not close"
            faces.append((cyc, pos))
    assert len(faces) == 18, f"expected 18 quiver faces, got {len(faces)}"

    colors = []
    for cyc, _ in faces:
        kinds = {fwd for _, fwd in cyc}
        assert len(kinds) == 1, "quiver face mixes arrow directions"
        colors.append("black" if kinds == {True} else "white")
    assert colors.count("black") == 9 and colors.count("white") == 9

    # node ids by least incident edge id (then black before white)
    order = sorted(range(18), key=lambda f: (min(e for e, _ in faces[f][0]), colors[f] == "white"))
    node_id = {f: i for i, f in enumerate(order)}

    def centroid(f):
        cyc, pos = faces[f]
        pts = []
        for d, p in zip(cyc, pos):
            eid, fwd = d
            tail = arrows[eid][0] if fwd else arrows[eid][1]
            pts.append((verts[tail][0] + PERIOD * p[0], verts[tail][1] + PERIOD * p[1]))
        x = sum(p[0] for p in pts) / len(pts)
        y = sum(p[1] for p in pts) / len(pts)
        return (round((x % PERIOD) / PERIOD, 6), round((y % PERIOD) / PERIOD, 6))

    nodes = [Node(node_id[f], colors[f], centroid(f)) for f in range(18)]

    edges = []
    for eid in sorted(arrows):
        fb = face_of[(eid, True)]
        fw = face_of[(eid, False)]
        assert colors[fb] == "black" and colors[fw] == "white", f"edge {eid} faces miscoloured"
        pos_b = faces[fb][1][faces[fb][0].index((eid, True))]
        pos_w = faces[fw][1][faces[fw][0].index((eid, False))]
        off = arrows[eid][2]
        edge_off = (pos_b[0] - pos_w[0] + off[0], pos_b[1] - pos_w[1] + off[1])
        edges.append(Edge(eid, node_id[fb], node_id[fw], edge_off))

    rotations = {}
    for f in range(18):
        rotations[node_id[f]] = tuple(e for e, _ in faces[f][0])

    model = DimerModel("longhex", nodes, edges, rotations)

    # verification: the package's dual must recover the transcription exactly
    # on tails and heads, and up to a per-tile copy gauge on offsets
    report = model.validate()
    assert report.valid, report.to_json()
    assert report.counts == (18, 28, 10), report.counts
    q = dual_quiver(model)
    for eid, (t, h, off) in arrows.items():
        a = q.arrows[eid]
        assert (a.tail, a.head) == (t, h), (eid, a, (t, h))
    gauge = {0: (0, 0)}
    queue = [0]
    while queue:
        v = queue.pop(0)
        for eid, (t, h, off) in arrows.items():
            a = q.arrows[eid]
            diff = (a.offset[0] - off[0], a.offset[1] - off[1])  # = g(h) - g(t)
            for src, dst, d in ((t, h, diff), (h, t, (-diff[0], -diff[1]))):
                if src == v:
                    want = (gauge[v][0] + d[0], gauge[v][1] + d[1])
                    if dst not in gauge:
                        gauge[dst] = want
                        queue.append(dst)
                    else:
                        assert gauge[dst] == want, f"offset gauge inconsistent at edge {eid}"
    assert len(gauge) == 10
    return model


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for model in (c3(), conifold(), longhex()):
        text = serialize_dimer(model)
        assert serialize_dimer(parse_dimer(text)) == text
        (OUT / f"{model.name}.json").write_text(text)
        print(f"wrote {model.name}.json")


if __name__ == "__main__":
    main()
