"""JSON and CSV formats. Floats are always written with 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .graphs import WeightedGraph, build


class MalformedInput(ValueError):
    """Input file or token that cannot be parsed into the expected structure."""


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    text = f"{x:.17g}"
    if text == "-0":
        text = "0"
    return text


def dumps(obj) -> str:
    """Compact JSON with fixed-precision floats, keys in insertion order."""
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj, path: str | Path | None = None, stream=None) -> None:
    text = dumps(obj) + "\n"
    if path is None:
        stream.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def graph_to_dict(graph: WeightedGraph) -> dict:
    return {"n": graph.n, "entries": [[i, j, w] for i, j, w in graph.edges()]}


def graph_from_dict(data) -> WeightedGraph:
    """Parse graph JSON; a synthesis document is accepted via its ``graph`` field."""
    if isinstance(data, dict) and "graph" in data and "n" not in data:
        data = data["graph"]
    if not isinstance(data, dict) or "n" not in data or "entries" not in data:
        raise MalformedInput('graph JSON needs "n" and "entries"')
    n, entries = data["n"], data["entries"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise MalformedInput('"n" must be an integer')
    if not isinstance(entries, list) or any(
        not isinstance(e, list)
        or len(e) != 3
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in e)
        for e in entries
    ):
        raise MalformedInput('"entries" must be a list of [i, j, w] triples')
    try:
        return build(n, entries)
    except (ValueError, IndexError) as exc:
        raise MalformedInput(str(exc)) from exc


def read_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def read_graph(path: str | Path) -> WeightedGraph:
    return graph_from_dict(read_json(path))


def write_graph(graph: WeightedGraph, path: str | Path | None = None, stream=None) -> None:
    write_json(graph_to_dict(graph), path, stream)


SCAN_HEADER = ("t", "re_amplitude", "im_amplitude", "fidelity")


def scan_csv(rows) -> str:
    lines = [",".join(SCAN_HEADER)]
    lines.extend(",".join(fmt_float(x) for x in row) for row in rows)
    return "\n".join(lines) + "\n"
