"""JSON file formats for graphs, labelings, colorings and coverings.

Graph file::

    {"vertices": ["u", "v"],
     "edges": [{"id": "e1", "tail": "u", "head": "v"}],
     "rotations": {"u": [["e1", "tail"]], "v": [["e1", "head"]]}}
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Union

from .embedding import DualGraph, Edge, EmbeddedGraph, Face, GraphError

PathLike = Union[str, Path]


def parse_graph(document: Union[str, dict]) -> EmbeddedGraph:
    """Validated graph from JSON text (or an already decoded dict)."""
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
    else:
        data = document
    if not isinstance(data, dict):
        raise GraphError("graph document must be a JSON object")
    problems = []
    vertices = data.get("vertices")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        problems.append("'vertices' must be a list of strings")
        vertices = []
    edges = []
    for i, e in enumerate(data.get("edges", [])):
        if not isinstance(e, dict) or not all(isinstance(e.get(k), str) for k in ("id", "tail", "head")):
            problems.append(f"edge #{i} needs string fields id, tail, head")
            continue
        edges.append(Edge(e["id"], e["tail"], e["head"]))
    rotations = {}
    raw_rot = data.get("rotations", {})
    if not isinstance(raw_rot, dict):
        problems.append("'rotations' must be an object")
        raw_rot = {}
    for v, darts in raw_rot.items():
        if not isinstance(darts, list) or not all(
            isinstance(d, list) and len(d) == 2 and all(isinstance(x, str) for x in d) for d in darts
        ):
            problems.append(f"rotation at {v!r} must be a list of [edge, end] pairs")
            continue
        rotations[v] = tuple(tuple(d) for d in darts)
    if problems:
        raise GraphError(problems)
    return EmbeddedGraph(tuple(vertices), tuple(edges), rotations)


def graph_to_dict(g: EmbeddedGraph) -> dict[str, Any]:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in g.edges],
        "rotations": {v: [list(d) for d in g.rotations[v]] for v in g.vertices},
    }


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def faces_to_dict(g: EmbeddedGraph, faces: list[Face]) -> dict[str, Any]:
    out = graph_to_dict(g)
    out["maps"] = {
        "faces": {f"f{i}": [list(a) for a in f.arcs] or {"vertex": f.anchor} for i, f in enumerate(faces)},
    }
    return out


def dual_to_dict(d: DualGraph) -> dict[str, Any]:
    out = graph_to_dict(d.graph)
    out["maps"] = {
        "faces": {
            v: ([list(a) for a in f.arcs] or {"vertex": f.anchor})
            for v, f in zip(d.graph.vertices, d.faces)
        },
        "edges": dict(d.to_dual),
    }
    return out


def load_graph(path: PathLike) -> EmbeddedGraph:
    """Read a graph file; a missing path falls back to a bundled graph of the same stem."""
    p = Path(path)
    if not p.exists():
        name = p.stem
        try:
            text = resources.files("surface_flows.data").joinpath(f"{name}.json").read_text()
        except (FileNotFoundError, OSError):
            raise FileNotFoundError(f"no graph file {path} (and no bundled graph {name!r})") from None
        return parse_graph(text)
    return parse_graph(p.read_text())


def bundled_graph_names() -> list[str]:
    files = resources.files("surface_flows.data").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def parse_labels(document: Union[str, dict]) -> tuple[str, dict[str, int]]:
    """Labeling file: ``{"group": spec, "<edge>": index, ...}``."""
    data = json.loads(document) if isinstance(document, str) else document
    if not isinstance(data, dict):
        raise ValueError("labeling document must be a JSON object")
    spec = data.get("group")
    values = {k: v for k, v in data.items() if k != "group"}
    if not all(isinstance(v, int) for v in values.values()):
        raise ValueError("labels must be element indices")
    return spec, values


def labels_to_dict(labeling) -> dict[str, Any]:
    out = {"group": labeling.group.spec}
    out.update(labeling.values)
    return out


def coloring_to_dict(coloring) -> dict[str, int]:
    return dict(coloring.values)


def covering_to_dict(cov) -> dict[str, Any]:
    out = graph_to_dict(cov.total)
    out["sheets"] = {v: [b, h] for v, (b, h) in cov.sheets.items()}
    out["projection"] = {
        "vertices": dict(cov.projection.vertex_map),
        "darts": [[list(d), list(img)] for d, img in cov.projection.dart_map.items()],
    }
    return out
