"""Graph text and JSON formats.

Text form::

    n 3 reflexive
    # comments run to end of line
    0 1
    1 2

The normalized text form lists ``n <N>`` and then every edge, loops
included, in sorted order, so parse followed by format is stable.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import GraphError
from .graph import Digraph, LabeledGraph, make_digraph


class GraphFormatError(GraphError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def parse_graph_text(text: str) -> Digraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if parts[0] != "n" or len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "reflexive"):
                raise GraphFormatError("expected header 'n <N> [reflexive]'", lineno)
            try:
                header = (int(parts[1]), len(parts) == 3)
            except ValueError:
                raise GraphFormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            continue
        if len(parts) != 2:
            raise GraphFormatError("expected an edge line '<u> <v>'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"bad edge {line!r}", lineno) from None
        if not (0 <= u < header[0] and 0 <= v < header[0]):
            raise GraphFormatError(f"edge ({u},{v}) has an endpoint out of range", lineno)
        edges.append((u, v))
    if header is None:
        raise GraphFormatError("missing header 'n <N>'")
    n, reflexive = header
    if n < 0:
        raise GraphFormatError("negative vertex count")
    return make_digraph(n, edges, reflexive=reflexive)


def format_graph_text(d: Digraph) -> str:
    lines = [f"n {d.n}"] + [f"{u} {v}" for u, v in d.sorted_edges()]
    return "\n".join(lines) + "\n"


def graph_to_json(d: Digraph, constants=()) -> dict:
    return {"n": d.n, "edges": [list(e) for e in d.sorted_edges()], "constants": list(constants)}


def graph_from_json(data: dict) -> LabeledGraph:
    if "n" not in data:
        raise GraphFormatError("JSON graph needs a key 'n'")
    try:
        g = make_digraph(int(data["n"]), [tuple(e) for e in data.get("edges", [])],
                         reflexive=bool(data.get("reflexive", False)))
    except (TypeError, ValueError) as exc:
        raise GraphFormatError(str(exc)) from None
    return LabeledGraph(g, tuple(data.get("constants", [])))


def loads_graph(text: str) -> LabeledGraph:
    """Accept either format; JSON is recognised by a leading brace."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"invalid JSON: {exc}") from None
        return graph_from_json(data)
    return LabeledGraph(parse_graph_text(text))


def load_graph(path) -> LabeledGraph:
    return loads_graph(Path(path).read_text())


def write_graph(path, d: Digraph, meta: dict | None = None, constants=()):
    """Write ``d`` as text (or JSON when the suffix is .json) plus an optional
    ``<path>.meta.json`` sidecar."""
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(graph_to_json(d, constants), sort_keys=True) + "\n")
    else:
        path.write_text(format_graph_text(d))
    if meta is not None:
        Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
