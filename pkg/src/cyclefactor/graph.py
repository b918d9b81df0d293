"""Oriented graphs, degree queries, induced subgraphs and seeded generators."""

from __future__ import annotations

import enum
import hashlib
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class DegreeMode(enum.Enum):
    SEMI = "semi"
    TOTAL = "total"


class GraphError(ValueError):
    pass


def derive_seed(seed: int, tag: str) -> int:
    """Child seed for a named branch of a seeded computation."""
    digest = hashlib.sha256(f"{seed}/{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


class OrientedGraph:
    """Immutable oriented graph on vertices ``0..n-1``.

    The adjacency matrix gives O(1) pair lookups and vectorised degree
    counts; successor/predecessor sets are built on first use for
    neighbourhood iteration.  ``labels[i]`` is the id vertex ``i`` had in
    the graph this one was induced from (identity for a fresh graph).
    """

    def __init__(self, adj: np.ndarray, labels: Sequence[int] | None = None):
        adj = np.array(adj, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError("adjacency matrix must be square")
        if adj.diagonal().any():
            raise GraphError("self-loop present")
        if (adj & adj.T).any():
            raise GraphError("anti-parallel edge pair present")
        adj.flags.writeable = False
        self._adj = adj
        n = adj.shape[0]
        if labels is None:
            labels = range(n)
        self.labels = tuple(int(x) for x in labels)
        if len(self.labels) != n:
            raise GraphError("labels must have one entry per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> OrientedGraph:
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if adj[u, v]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            if adj[v, u]:
                raise GraphError(f"anti-parallel pair ({u}, {v})")
            adj[u, v] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adj(self) -> np.ndarray:
        return self._adj

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"OrientedGraph(n={self.n}, e={self.num_edges})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedGraph):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self._adj, other._adj)

    def __hash__(self) -> int:
        return hash((self.labels, self._adj.tobytes()))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    @cached_property
    def num_edges(self) -> int:
        return int(self._adj.sum())

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self._adj)
        return list(zip(us.tolist(), vs.tolist()))

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    @cached_property
    def in_degrees(self) -> np.ndarray:
        return self._adj.sum(axis=0)

    @cached_property
    def successors(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(np.flatnonzero(row).tolist()) for row in self._adj)

    @cached_property
    def predecessors(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(np.flatnonzero(col).tolist()) for col in self._adj.T)


def min_degree(g: OrientedGraph, mode: DegreeMode = DegreeMode.SEMI) -> int:
    """Minimum semi-degree (``SEMI``) or minimum total degree (``TOTAL``)."""
    if g.n == 0:
        return 0
    if mode is DegreeMode.SEMI:
        return int(min(g.out_degrees.min(), g.in_degrees.min()))
    return int((g.out_degrees + g.in_degrees).min())


def degree_into(g: OrientedGraph, v: int, w: Iterable[int], direction: str) -> int:
    """Number of out- (``"out"``) or in- (``"in"``) neighbours of ``v`` in ``w``."""
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for n={g.n}")
    if direction == "out":
        nbrs = g.successors[v]
    elif direction == "in":
        nbrs = g.predecessors[v]
    else:
        raise ValueError(f"direction must be 'in' or 'out', not {direction!r}")
    return sum(1 for x in set(w) if x in nbrs)


def induced(g: OrientedGraph, w: Iterable[int]) -> OrientedGraph:
    """Copy of ``G[w]`` relabelled to ``0..|w|-1`` in increasing order of ``w``.

    The result's labels point back through ``g.labels``, so after any
    number of nested inductions they are still ids of the root graph.
    """
    idx = np.array(sorted(set(w)), dtype=np.intp)
    if idx.size and (idx[0] < 0 or idx[-1] >= g.n):
        raise IndexError("vertex subset out of range")
    return OrientedGraph(g.adj[np.ix_(idx, idx)], [g.labels[i] for i in idx])


def random_tournament(n: int, seed: int) -> OrientedGraph:
    """Tournament with every pair oriented by an independent fair coin."""
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    forward = rng.random(iu.size) < 0.5
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[forward], ju[forward]] = True
    adj[ju[~forward], iu[~forward]] = True
    return OrientedGraph(adj)


def random_oriented(n: int, p: float, seed: int) -> OrientedGraph:
    """Each pair present with probability ``p``, then oriented by a fair coin."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    present = rng.random(iu.size) < p
    forward = rng.random(iu.size) < 0.5
    adj = np.zeros((n, n), dtype=bool)
    fw = present & forward
    bw = present & ~forward
    adj[iu[fw], ju[fw]] = True
    adj[ju[bw], iu[bw]] = True
    return OrientedGraph(adj)
