"""Plain-text edge lists: a ``n e`` header followed by ``e`` lines ``u v``."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .graph import OrientedGraph


class EdgeListError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise EdgeListError(lineno, f"expected {count} integers, got {line!r}")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise EdgeListError(lineno, f"not an integer in {line!r}") from None
    if any(x < 0 for x in values):
        raise EdgeListError(lineno, "negative value")
    return values


def parse_edgelist(text: str) -> OrientedGraph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EdgeListError(1, "missing header")
    n, e = _ints(lines[0], 1, 2)
    if len(lines) - 1 != e:
        raise EdgeListError(len(lines), f"header declares {e} edges, found {len(lines) - 1}")
    adj = np.zeros((n, n), dtype=bool)
    for lineno, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, lineno, 2)
        if u >= n or v >= n:
            raise EdgeListError(lineno, f"vertex out of range for n={n}")
        if u == v:
            raise EdgeListError(lineno, f"self-loop at {u}")
        if adj[u, v]:
            raise EdgeListError(lineno, f"duplicate edge {u} {v}")
        if adj[v, u]:
            raise EdgeListError(lineno, f"anti-parallel edge {u} {v}")
        adj[u, v] = True
    return OrientedGraph(adj)


def format_edgelist(g: OrientedGraph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def read_edgelist(path: str | Path) -> OrientedGraph:
    return parse_edgelist(Path(path).read_text(encoding="ascii"))


def write_edgelist(g: OrientedGraph, path: str | Path) -> None:
    Path(path).write_bytes(format_edgelist(g).encode("ascii"))


def graph_hash(g: OrientedGraph) -> str:
    """SHA-256 of the canonical edge-list text."""
    return hashlib.sha256(format_edgelist(g).encode("ascii")).hexdigest()
