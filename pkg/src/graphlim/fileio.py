"""File formats: graphs and graphons as JSON, theta fields as CSV.

All floats are serialized with 17 significant digits so every value
round-trips through parsing without precision loss.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import ParameterError
from .fields import ThetaField
from .graphons import AnalyticGraphon, Graph, StepGraphon, analytic_from_kind


def format_float(x) -> str:
    return format(float(x), ".17g")


def _render(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(k)}: {_render(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_render(v) for v in obj) + "]"
    raise ParameterError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with deterministic layout and 17-significant-digit floats."""
    return _render(obj) + "\n"


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edge_list()]}


def graph_from_dict(data: dict) -> Graph:
    try:
        return Graph.from_edges(int(data["n"]), data["edges"])
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed graph file: {exc}") from exc


def write_graph(path, g: Graph):
    write_text(path, dumps(graph_to_dict(g)))


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))


def graphon_to_dict(w) -> dict:
    if isinstance(w, StepGraphon):
        return {
            "type": "step",
            "widths": [float(v) for v in w.widths],
            "values": [[float(v) for v in row] for row in w.values],
        }
    if isinstance(w, AnalyticGraphon):
        return {"type": "analytic", "kind": w.kind, "params": w.params()}
    raise ParameterError(f"cannot serialize kernel of type {type(w).__name__}")


def graphon_from_dict(data: dict):
    kind = data.get("type")
    if kind == "step":
        return StepGraphon(np.asarray(data["widths"]), np.asarray(data["values"]))
    if kind == "analytic":
        return analytic_from_kind(data["kind"], data.get("params", {}))
    raise ParameterError(f"unknown graphon file type {kind!r}")


def write_graphon(path, w):
    write_text(path, dumps(graphon_to_dict(w)))


def read_graphon(path):
    with open(path, encoding="utf-8") as fh:
        return graphon_from_dict(json.load(fh))


def theta_to_csv(field: ThetaField) -> str:
    header = "cell," + ",".join(f"theta_{k + 1}" for k in range(field.n_labels))
    lines = [header]
    for i, row in enumerate(field.weights, start=1):
        lines.append(f"{i}," + ",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def write_theta(path, field: ThetaField):
    write_text(path, theta_to_csv(field))


def read_theta(path) -> ThetaField:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("cell,"):
        raise ParameterError("theta file must start with a cell,theta_* header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        rows.append([float(v) for v in parts[1:]])
    return ThetaField(np.asarray(rows))
