"""JSON documents for graphs, codes, pair specs and results."""

from __future__ import annotations

import json
from pathlib import Path

from . import fixtures
from .dimension import StationaryGroup
from .errors import InputError
from .sft import Graph, OneBlockCode, SUPairSpec, build_edge_shift, make_code


def parse_json(text: str, source: str = "<input>") -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")
    return doc


def load_document(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    return parse_json(text, path)


def _require_keys(doc: dict, allowed: set, required: set, what: str) -> None:
    extra = set(doc) - allowed
    if extra:
        raise InputError(f"{what}: unknown fields {sorted(extra)}")
    missing = required - set(doc)
    if missing:
        raise InputError(f"{what}: missing fields {sorted(missing)}")


def graph_from_json(doc) -> Graph:
    if isinstance(doc, str):
        if doc not in fixtures.GRAPHS:
            raise InputError(f"unknown fixture graph {doc!r}")
        return fixtures.GRAPHS[doc]()
    if not isinstance(doc, dict):
        raise InputError("graph must be an object or a fixture name")
    if "fixture" in doc:
        _require_keys(doc, {"fixture"}, {"fixture"}, "graph")
        return graph_from_json(doc["fixture"])
    _require_keys(doc, {"vertices", "edges", "name"}, {"vertices", "edges"}, "graph")
    edges, src, tgt = [], {}, {}
    for e in doc["edges"]:
        if not isinstance(e, dict):
            raise InputError("edge entries must be objects")
        _require_keys(e, {"id", "src", "tgt"}, {"id", "src", "tgt"}, "edge")
        if e["id"] in src:
            raise InputError(f"duplicate edge id {e['id']!r}")
        edges.append(e["id"])
        src[e["id"]] = e["src"]
        tgt[e["id"]] = e["tgt"]
    vertices = list(doc["vertices"])
    if len(set(vertices)) != len(vertices):
        raise InputError("duplicate vertex ids")
    for e in edges:
        if src[e] not in vertices or tgt[e] not in vertices:
            raise InputError(f"edge {e!r} uses an undeclared vertex")
    return build_edge_shift(vertices, edges, src, tgt)


def graph_to_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices),
            "edges": [{"id": e, "src": g.src(e), "tgt": g.tgt(e)} for e in g.edges]}


def code_from_json(doc: dict, domain: Graph, codomain: Graph) -> OneBlockCode:
    _require_keys(doc, {"edge_map", "vertex_map"}, {"edge_map"}, "code")
    code = make_code(domain, codomain, doc["edge_map"])
    if "vertex_map" in doc and dict(doc["vertex_map"]) != {str(k): v for k, v in code.vertex_map.items()}:
        raise InputError("vertex_map disagrees with the edge map")
    return code


PAIR_KEYS = {"Y", "Z", "pairs", "trivial", "fixture", "name", "harness"}


def pair_from_json(doc: dict) -> SUPairSpec:
    _require_keys(doc, PAIR_KEYS, set(), "pair spec")
    name = doc.get("name", "")
    if "fixture" in doc:
        if doc["fixture"] not in fixtures.PAIRS:
            raise InputError(f"unknown fixture pair {doc['fixture']!r}")
        return fixtures.PAIRS[doc["fixture"]]()
    if "trivial" in doc:
        return SUPairSpec.trivial_pair(graph_from_json(doc["trivial"]), name)
    for k in ("Y", "Z", "pairs"):
        if k not in doc:
            raise InputError(f"pair spec: missing field {k!r}")
    Y, Z = graph_from_json(doc["Y"]), graph_from_json(doc["Z"])
    pairs = frozenset(tuple(p) for p in doc["pairs"])
    if any(len(p) != 2 for p in pairs):
        raise InputError("pairs must be [Y-edge, Z-edge] couples")
    return SUPairSpec(Y, Z, pairs, False, name)


def harness_options(doc: dict) -> dict:
    opts = doc.get("harness", {})
    if not isinstance(opts, dict) or set(opts) - {"corrupt_sign"}:
        raise InputError("harness accepts only corrupt_sign")
    return opts


def group_to_json(G: StationaryGroup) -> dict:
    return {"rank": G.rank, "torsion": list(G.torsion), "H": G.H,
            "stage_convention": G.stage_convention}


def group_from_json(doc: dict) -> StationaryGroup:
    _require_keys(doc, {"rank", "torsion", "H", "stage_convention"}, {"rank", "H"}, "group")
    return StationaryGroup(doc["rank"], tuple(doc.get("torsion", ())), doc["H"],
                           doc.get("stage_convention", "plain"))


def describe_group(G: StationaryGroup) -> str:
    """Short text form, e.g. ``rank 1, H=[2]``."""
    H = G.H[0] if G.n == 1 else G.H
    text = f"rank {G.rank}, H={json.dumps(H, separators=(',', ':'))}"
    if G.torsion:
        text += f", torsion {list(G.torsion)}"
    return text


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str)
