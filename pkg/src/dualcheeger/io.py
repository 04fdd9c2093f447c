"""Edge-list files and JSON report documents."""
from __future__ import annotations

import json
import math
from typing import Iterable

from .exceptions import DomainError, ParseError
from .graph import WeightedGraph

__all__ = [
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
    "write_edge_list",
    "format_weight",
    "dumps_report",
    "loads_report",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "1"


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse ``u v [w]`` lines; ``#`` starts a comment line.

    Vertex ids are 0-based and the vertex count is one more than the
    largest id.  Every vertex must carry an edge.
    """
    edges = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {len(fields)} fields", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"vertex ids must be integers: {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError("vertex ids must be nonnegative", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        w = 1.0
        if len(fields) == 3:
            try:
                w = float(fields[2])
            except ValueError:
                raise ParseError(f"bad weight {fields[2]!r}", lineno) from None
            if not (math.isfinite(w) and w > 0):
                raise ParseError(f"weight must be positive and finite, got {fields[2]}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {{{u}, {v}}} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u, v, w))
    if not edges:
        raise ParseError("no edges found")
    n = 1 + max(max(u, v) for u, v, _ in edges)
    try:
        return WeightedGraph(n, edges)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def read_edge_list(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_weight(w: float) -> str:
    s = repr(float(w))
    return s[:-2] if s.endswith(".0") else s


def format_edge_list(g: WeightedGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines += [f"{u} {v} {format_weight(w)}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def write_edge_list(g: WeightedGraph, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g, comments))


def _clean(obj):
    # JSON has no nan/inf; numpy scalars and tuples become plain types
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_clean(v) for v in obj)
    if hasattr(obj, "tolist"):
        return _clean(obj.tolist())
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(doc: dict) -> str:
    """Key-sorted, indented JSON with a trailing newline."""
    doc = dict(doc)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def loads_report(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported report schema {doc.get('schema_version')!r}")
    return doc
