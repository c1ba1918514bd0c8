"""JSON serialization of dimer models.

Format contract: top-level keys "name", "nodes", "edges", "rotations".
Each node is {"id", "color", "pos"?}, each edge {"id", "black", "white",
"offset"} with a 2-element integer offset array; the white endpoint of an
edge lives in the fundamental-domain copy shifted by "offset" relative to
the black endpoint's copy.  Canonical files round-trip byte for byte.
"""

from __future__ import annotations

import json
from importlib import resources

from .errors import InputError
from .model import DimerModel, Edge, Node


def _expect(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise InputError(f"{pointer}: {message}")


def _int_pair(value, pointer: str) -> tuple[int, int]:
    _expect(isinstance(value, list) and len(value) == 2, pointer, "expected a 2-element array")
    _expect(all(isinstance(x, int) and not isinstance(x, bool) for x in value), pointer, "expected integers")
    return (value[0], value[1])


def parse_dimer(data: bytes | str) -> DimerModel:
    """Parse a dimer JSON document; schema errors carry JSON-pointer locations."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"/: not valid UTF-8 ({exc})") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise InputError(f"/: not valid JSON ({exc})") from None

    _expect(isinstance(doc, dict), "/", "expected an object")
    for key in ("name", "nodes", "edges", "rotations"):
        _expect(key in doc, "/", f"missing key '{key}'")
    _expect(isinstance(doc["name"], str), "/name", "expected a string")
    _expect(isinstance(doc["nodes"], list), "/nodes", "expected an array")
    _expect(isinstance(doc["edges"], list), "/edges", "expected an array")
    _expect(isinstance(doc["rotations"], dict), "/rotations", "expected an object")

    nodes = []
    for i, nd in enumerate(doc["nodes"]):
        ptr = f"/nodes/{i}"
        _expect(isinstance(nd, dict), ptr, "expected an object")
        _expect(isinstance(nd.get("id"), int), f"{ptr}/id", "expected an integer")
        _expect(nd.get("color") in ("black", "white"), f"{ptr}/color", "expected 'black' or 'white'")
        pos = nd.get("pos")
        if pos is not None:
            _expect(isinstance(pos, list) and len(pos) == 2, f"{ptr}/pos", "expected a 2-element array")
            pos = (float(pos[0]), float(pos[1]))
        nodes.append(Node(nd["id"], nd["color"], pos))

    edges = []
    for i, ed in enumerate(doc["edges"]):
        ptr = f"/edges/{i}"
        _expect(isinstance(ed, dict), ptr, "expected an object")
        for key in ("id", "black", "white"):
            _expect(isinstance(ed.get(key), int), f"{ptr}/{key}", "expected an integer")
        offset = _int_pair(ed.get("offset"), f"{ptr}/offset")
        edges.append(Edge(ed["id"], ed["black"], ed["white"], offset))

    rotations = {}
    for key, rot in doc["rotations"].items():
        ptr = f"/rotations/{key}"
        try:
            nid = int(key)
        except ValueError:
            raise InputError(f"{ptr}: key is not an integer node id") from None
        _expect(isinstance(rot, list), ptr, "expected an array of edge ids")
        _expect(all(isinstance(x, int) for x in rot), ptr, "expected integers")
        rotations[nid] = tuple(rot)

    return DimerModel(doc["name"], nodes, edges, rotations)


def serialize_dimer(model: DimerModel) -> str:
    doc = {
        "name": model.name,
        "nodes": [
            {"id": n.id, "color": n.color, **({"pos": [n.pos[0], n.pos[1]]} if n.pos else {})}
            for n in model.nodes
        ],
        "edges": [
            {"id": e.id, "black": e.black, "white": e.white, "offset": list(e.offset)}
            for e in model.edges
        ],
        "rotations": {str(nid): list(model.rotations[nid]) for nid in sorted(model.rotations)},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def fixture_names() -> list[str]:
    root = resources.files("dimertools") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> DimerModel:
    path = resources.files("dimertools") / "fixtures" / f"{name}.json"
    if not path.is_file():
        raise InputError(f"unknown fixture '{name}'")
    return parse_dimer(path.read_text())
