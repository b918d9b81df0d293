"""Exact search for spanning copies of arbitrarily oriented cycles.

A cycle orientation is a pattern of ``+1``/``-1`` entries, one per cycle
edge: entry ``i`` is ``+1`` when the edge between positions ``i`` and
``i+1`` (mod ``ell``) points forward.  Both solvers pin vertex 0 at
position 0 and try every distinct rotation of the pattern, which covers
every placement of vertex 0 on the cycle, so a ``None`` result is a
certificate that no embedding exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graph import OrientedGraph

DEFAULT_DP_CAP = 20
DEFAULT_BUDGET = 10**7

# Below this size the bitmask DP runs as a plain loop; above it, vectorised.
_LOOP_DP_LIMIT = 13


class CapExceeded(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, expansions: int):
        super().__init__(f"search budget exhausted after {expansions} expansions")
        self.expansions = expansions


@dataclass(frozen=True)
class OrientationPattern:
    dirs: tuple[int, ...]

    def __post_init__(self):
        dirs = tuple(int(d) for d in self.dirs)
        if len(dirs) < 3:
            raise ValueError("a cycle pattern needs at least 3 edges")
        if any(d not in (1, -1) for d in dirs):
            raise ValueError("pattern entries must be +1 or -1")
        object.__setattr__(self, "dirs", dirs)

    @classmethod
    def from_string(cls, text: str) -> OrientationPattern:
        bad = set(text) - {"+", "-"}
        if bad:
            raise ValueError(f"pattern may only contain '+' and '-', got {sorted(bad)}")
        return cls(tuple(1 if ch == "+" else -1 for ch in text))

    @classmethod
    def directed(cls, ell: int) -> OrientationPattern:
        return cls((1,) * ell)

    def __len__(self) -> int:
        return len(self.dirs)

    def __str__(self) -> str:
        return "".join("+" if d == 1 else "-" for d in self.dirs)

    def rotate(self, r: int) -> OrientationPattern:
        r %= len(self.dirs)
        return OrientationPattern(self.dirs[r:] + self.dirs[:r])

    def reversed_negated(self) -> OrientationPattern:
        """The same cycle read backwards: order reverses and every arc flips."""
        return OrientationPattern(tuple(-d for d in reversed(self.dirs)))

    @property
    def is_directed(self) -> bool:
        return len(set(self.dirs)) == 1


@dataclass(frozen=True)
class CycleEmbedding:
    vertices: tuple[int, ...]
    pattern: OrientationPattern

    def relabel(self, labels: Sequence[int]) -> CycleEmbedding:
        return CycleEmbedding(tuple(labels[v] for v in self.vertices), self.pattern)


@dataclass(frozen=True)
class EmbeddingVerdict:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def theorem_threshold(n: int) -> int:
    """``ceil((3n - 1) / 8)``: semi-degree guaranteeing every Hamilton orientation for large n."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return -(-(3 * n - 1) // 8)


def canonicalize_pattern(p: OrientationPattern) -> OrientationPattern:
    """Least rotation of ``p`` or of its reversal, comparing ``-1 < +1``."""
    ell = len(p)
    candidates = []
    for base in (p.dirs, p.reversed_negated().dirs):
        candidates.extend(base[r:] + base[:r] for r in range(ell))
    return OrientationPattern(min(candidates))


def same_cycle(p: OrientationPattern, q: OrientationPattern) -> bool:
    return len(p) == len(q) and canonicalize_pattern(p) == canonicalize_pattern(q)


def verify_embedding(g: OrientedGraph, emb: CycleEmbedding) -> EmbeddingVerdict:
    vs = emb.vertices
    dirs = emb.pattern.dirs
    if len(vs) != len(dirs):
        return EmbeddingVerdict(False, None, f"{len(vs)} vertices for a pattern of length {len(dirs)}")
    seen = set()
    for i, v in enumerate(vs):
        if not 0 <= v < g.n:
            return EmbeddingVerdict(False, i, f"vertex {v} out of range")
        if v in seen:
            return EmbeddingVerdict(False, i, f"vertex {v} repeated")
        seen.add(v)
    ell = len(vs)
    for i, d in enumerate(dirs):
        a, b = vs[i], vs[(i + 1) % ell]
        if d == -1:
            a, b = b, a
        if not g.has_edge(a, b):
            return EmbeddingVerdict(False, i, f"edge {a}->{b} missing")
    return EmbeddingVerdict(True)


def _neighbour_masks(g: OrientedGraph) -> tuple[list[int], list[int]]:
    out_masks = [sum(1 << v for v in nbrs) for nbrs in g.successors]
    in_masks = [sum(1 << v for v in nbrs) for nbrs in g.predecessors]
    return out_masks, in_masks


def _distinct_rotations(p: OrientationPattern) -> Iterable[tuple[int, tuple[int, ...]]]:
    seen = set()
    dirs = p.dirs
    for r in range(len(dirs)):
        q = dirs[r:] + dirs[:r]
        if q not in seen:
            seen.add(q)
            yield r, q


def _unrotate(path: list[int], r: int) -> tuple[int, ...]:
    ell = len(path)
    out = [0] * ell
    for i, v in enumerate(path):
        out[(i + r) % ell] = v
    return tuple(out)


class _Relations:
    """Bitmask lookups for one rotated pattern with vertex 0 at position 0.

    ``pred[c][u]``: vertices that may sit at position ``c-1`` when ``u``
    sits at position ``c``.  ``close``: vertices allowed at the last
    position, given vertex 0 at position 0.
    """

    def __init__(self, out_masks: list[int], in_masks: list[int], q: tuple[int, ...]):
        n = len(q)
        self.pred = [None] + [
            in_masks if q[c - 1] == 1 else out_masks for c in range(1, n)
        ]
        self.close = in_masks[0] if q[n - 1] == 1 else out_masks[0]


def _reconstruct(dp, rel: _Relations, n: int, finals: int) -> list[int]:
    x = (finals & -finals).bit_length() - 1
    path = [x]
    mask = (1 << n) - 1
    for c in range(n - 1, 0, -1):
        mask ^= 1 << x
        options = int(dp[mask]) & rel.pred[c][x]
        x = (options & -options).bit_length() - 1
        path.append(x)
    path.reverse()
    return path


def _dp_loop(n: int, rel: _Relations) -> list[int] | None:
    full = (1 << n) - 1
    dp = [0] * (1 << n)
    dp[1] = 1
    for mask in range(1, full, 2):
        ends = dp[mask]
        if not ends:
            continue
        c = mask.bit_count()
        pred_c = rel.pred[c]
        free = full & ~mask
        while free:
            bit = free & -free
            free ^= bit
            u = bit.bit_length() - 1
            if pred_c[u] & ends:
                dp[mask | bit] |= bit
    finals = dp[full] & rel.close
    if not finals:
        return None
    return _reconstruct(dp, rel, n, finals)


@lru_cache(maxsize=4)
def _layers(n: int) -> tuple[np.ndarray, ...]:
    masks = np.arange(1, 1 << n, 2, dtype=np.int64)
    counts = np.bitwise_count(masks)
    return tuple(masks[counts == c] for c in range(n + 1))


def _dp_vectorised(n: int, rel: _Relations) -> list[int] | None:
    full = (1 << n) - 1
    dp = np.zeros(1 << n, dtype=np.int64)
    dp[1] = 1
    layers = _layers(n)
    for c in range(1, n):
        layer = layers[c]
        live = layer[dp[layer] != 0]
        if live.size == 0:
            return None
        ends = dp[live]
        for u in range(1, n):
            bit = 1 << u
            free = (live & bit) == 0
            hit = free & ((ends & rel.pred[c][u]) != 0)
            if hit.any():
                dp[live[hit] | bit] |= bit
    finals = int(dp[full]) & rel.close
    if not finals:
        return None
    return _reconstruct(dp, rel, n, finals)


def find_cycle_dp(
    g: OrientedGraph, pattern: OrientationPattern, cap: int = DEFAULT_DP_CAP
) -> CycleEmbedding | None:
    """Spanning copy of ``pattern`` in ``g`` by subset DP, or ``None`` if none exists.

    States are (visited set, last vertex); the size of the visited set fixes
    the cycle position and hence the direction the next arc must have.
    """
    n = g.n
    if len(pattern) != n:
        raise ValueError(f"pattern length {len(pattern)} != n={n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the DP cap of {cap}")
    out_masks, in_masks = _neighbour_masks(g)
    solve = _dp_loop if n <= _LOOP_DP_LIMIT else _dp_vectorised
    for r, q in _distinct_rotations(pattern):
        path = solve(n, _Relations(out_masks, in_masks, q))
        if path is not None:
            return CycleEmbedding(_unrotate(path, r), pattern)
    return None


def find_cycle_backtrack(
    g: OrientedGraph, pattern: OrientationPattern, budget: int | None = DEFAULT_BUDGET
) -> CycleEmbedding | None:
    """Depth-first search for a spanning copy of ``pattern``.

    Extends a path from vertex 0, trying the candidate with the fewest
    unvisited neighbours first and remembering dead (visited set, last
    vertex) states.  Returns ``None`` only after exhausting the tree;
    raises :class:`BudgetExhausted` once more than ``budget`` nodes have
    been expanded (``None`` means unbounded).
    """
    n = g.n
    if len(pattern) != n:
        raise ValueError(f"pattern length {len(pattern)} != n={n}")
    out_masks, in_masks = _neighbour_masks(g)
    any_masks = [o | i for o, i in zip(out_masks, in_masks)]
    full = (1 << n) - 1
    expansions = 0

    for r, q in _distinct_rotations(pattern):
        rel = _Relations(out_masks, in_masks, q)
        # next[c][x]: vertices allowed at position c when x sits at c-1
        nxt = [None] + [out_masks if q[c - 1] == 1 else in_masks for c in range(1, n)]
        dead: set[tuple[int, int]] = set()
        path = [0]

        def extend(mask: int, last: int) -> bool:
            nonlocal expansions
            expansions += 1
            if budget is not None and expansions > budget:
                raise BudgetExhausted(expansions - 1)
            c = len(path)
            if c == n:
                return bool(rel.close >> last & 1)
            free = full & ~mask
            if not rel.close & free:
                return False
            cand = nxt[c][last] & free
            if c == n - 1:
                cand &= rel.close
            order = []
            while cand:
                bit = cand & -cand
                cand ^= bit
                u = bit.bit_length() - 1
                order.append(((any_masks[u] & free).bit_count(), u))
            order.sort()
            for _, u in order:
                state = (mask | 1 << u, u)
                if state in dead:
                    continue
                path.append(u)
                if extend(*state):
                    return True
                path.pop()
                dead.add(state)
            return False

        if extend(1, 0):
            return CycleEmbedding(_unrotate(path, r), pattern)
    return None
