"""Degree-preserving random splits and recursive equipartitions.

A single split draws uniform vertex subsets of a prescribed size until both
sides keep a minimum relative degree of at least ``delta - 2 n^(-1/3)``
(clamped at zero), where ``delta`` is the relative minimum degree of the
graph being split.  Applying the split recursively, always peeling off
``floor(m/2)`` blocks worth of vertices, yields ``m`` blocks of size ``ell``
whose relative degree loses at most ``2 ell^(-1/3) sum_j 2^(-j/3)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .graph import DegreeMode, OrientedGraph, derive_seed, induced, min_degree

DEFAULT_MAX_ATTEMPTS = 100

# Lower end of the admissible split ratio |W|/n.
SPLIT_RATIO_FLOOR = Fraction(1, 4)

# 2 / (1 - 2^(-1/3)); the infinite geometric sum behind the simplified bound.
GEOMETRIC_CONSTANT = 2.0 / (1.0 - 2.0 ** (-1.0 / 3.0))


class DivisibilityError(ValueError):
    pass


class SplitPreconditionError(ValueError):
    pass


class AttemptsExhausted(RuntimeError):
    """No sampled split met the threshold.

    ``best`` holds ``(w, report)`` for the sample with the largest
    ``min(achieved_left, achieved_right)``; ``path`` locates the failing
    node in the recursion (``""`` is the root, then ``L``/``R`` steps).
    """

    def __init__(self, max_attempts: int, best: tuple[tuple[int, ...], SplitReport], path: str = ""):
        self.max_attempts = max_attempts
        self.best = best
        self.path = path
        super().__init__(self._message())

    def _message(self) -> str:
        where = self.path or "root"
        return f"no split met the threshold in {self.max_attempts} attempts (node {where})"

    def at(self, path: str) -> AttemptsExhausted:
        self.path = path
        self.args = (self._message(),)
        return self


@dataclass(frozen=True)
class SplitThreshold:
    delta: Fraction
    n: int
    value: float

    @classmethod
    def for_graph(cls, delta: Fraction, n: int) -> SplitThreshold:
        return cls(delta, n, max(0.0, float(delta) - 2.0 * n ** (-1.0 / 3.0)))


@dataclass(frozen=True)
class SplitReport:
    path: str
    n: int
    attempts: int
    threshold: SplitThreshold
    left_degree: int
    left_size: int
    right_degree: int
    right_size: int
    mode: DegreeMode
    accepted: bool = True

    @property
    def achieved_left(self) -> Fraction:
        return Fraction(self.left_degree, self.left_size)

    @property
    def achieved_right(self) -> Fraction:
        return Fraction(self.right_degree, self.right_size)

    @property
    def score(self) -> Fraction:
        return min(self.achieved_left, self.achieved_right)

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "n": self.n,
            "attempts": self.attempts,
            "accepted": self.accepted,
            "mode": self.mode.value,
            "threshold": {
                "delta": _fraction_dict(self.threshold.delta),
                "n": self.threshold.n,
                "value": self.threshold.value,
            },
            "left": {"min_degree": self.left_degree, "size": self.left_size,
                     "relative": float(self.achieved_left)},
            "right": {"min_degree": self.right_degree, "size": self.right_size,
                      "relative": float(self.achieved_right)},
        }


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]
    part_size: int
    reports: tuple[SplitReport, ...]
    delta: Fraction
    k: int
    bound_claimed: float
    mode: DegreeMode
    seed: int
    below_threshold: bool = False

    def to_dict(self) -> dict:
        return {
            "part_size": self.part_size,
            "m": len(self.blocks),
            "k": self.k,
            "mode": self.mode.value,
            "seed": self.seed,
            "delta": _fraction_dict(self.delta),
            "bound_claimed": self.bound_claimed,
            "simplified_bound": simplified_bound(float(self.delta), self.part_size),
            "below_threshold": self.below_threshold,
            "blocks": [list(b) for b in self.blocks],
            "reports": [r.to_dict() for r in self.reports],
        }


def _fraction_dict(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "value": float(x)}


def theoretical_bound(delta: float, ell: int, k: int) -> float:
    """``delta - 2 ell^(-1/3) sum_{j<k} 2^(-j/3)``; not clamped."""
    if ell < 1 or k < 0:
        raise ValueError("need ell >= 1 and k >= 0")
    return float(delta) - 2.0 * ell ** (-1.0 / 3.0) * sum(2.0 ** (-j / 3.0) for j in range(k))


def simplified_bound(delta: float, ell: int) -> float:
    if ell < 1:
        raise ValueError("need ell >= 1")
    return float(delta) - 10.0 * ell ** (-1.0 / 3.0)


def level_costs(ell: int, k: int) -> list[float]:
    """Worst-case degree loss at each recursion depth, root first.

    A node at depth ``i`` has more than ``2^(k-1-i)`` blocks, so its split
    costs at most ``2 (2^(k-1-i) ell)^(-1/3)``.  The costs sum to the
    partial geometric series in :func:`theoretical_bound`.
    """
    return [2.0 * (2.0 ** (k - 1 - i) * ell) ** (-1.0 / 3.0) for i in range(k)]


def depth_for(m: int) -> int:
    """Smallest ``k`` with ``m <= 2**k``."""
    if m < 1:
        raise ValueError("m must be positive")
    return (m - 1).bit_length()


class _SideDegrees:
    """Vectorised min-degree evaluation of both sides of a candidate split."""

    def __init__(self, g: OrientedGraph, mode: DegreeMode):
        self.mode = mode
        self.a = g.adj.astype(np.float32)
        self.out_deg = g.out_degrees.astype(np.float32)
        self.in_deg = g.in_degrees.astype(np.float32)

    def evaluate(self, in_w: np.ndarray) -> tuple[int, int]:
        mask = in_w.astype(np.float32)
        out_w = self.a @ mask
        in_from_w = mask @ self.a
        out_side = np.where(in_w, out_w, self.out_deg - out_w)
        in_side = np.where(in_w, in_from_w, self.in_deg - in_from_w)
        if self.mode is DegreeMode.SEMI:
            per_vertex = np.minimum(out_side, in_side)
        else:
            per_vertex = out_side + in_side
        left = per_vertex[in_w]
        right = per_vertex[~in_w]
        return (int(left.min()) if left.size else 0, int(right.min()) if right.size else 0)


def random_split(
    g: OrientedGraph,
    m1: int,
    mode: DegreeMode = DegreeMode.SEMI,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    *,
    path: str = "",
) -> tuple[tuple[int, ...], SplitReport]:
    """Sample size-``m1`` subsets until both sides clear the split threshold.

    Returns the accepted subset (sorted local vertex ids) and its report.
    Raises :class:`AttemptsExhausted` carrying the best sample otherwise.
    """
    n = g.n
    if not (SPLIT_RATIO_FLOOR * n <= m1 and 2 * m1 <= n):
        raise SplitPreconditionError(f"need n/4 <= m1 <= n/2, got m1={m1}, n={n}")
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    threshold = SplitThreshold.for_graph(Fraction(min_degree(g, mode), n), n)
    sides = _SideDegrees(g, mode)
    rng = np.random.default_rng(seed)
    best = None
    for attempt in range(1, max_attempts + 1):
        chosen = rng.choice(n, size=m1, replace=False)
        in_w = np.zeros(n, dtype=bool)
        in_w[chosen] = True
        left, right = sides.evaluate(in_w)
        w = tuple(np.flatnonzero(in_w).tolist())
        report = SplitReport(path, n, attempt, threshold, left, m1, right, n - m1, mode)
        ok = report.achieved_left >= threshold.value and report.achieved_right >= threshold.value
        if ok:
            return w, report
        if best is None or report.score > best[1].score:
            best = (w, replace(report, accepted=False))
    raise AttemptsExhausted(max_attempts, best, path)


def recursive_equipartition(
    g: OrientedGraph,
    ell: int,
    mode: DegreeMode = DegreeMode.SEMI,
    seed: int = 0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    *,
    best_effort: bool = False,
) -> Partition:
    """Split ``g`` into ``n/ell`` blocks of size ``ell`` by recursive halving.

    Blocks are reported in the ids of ``g.labels``.  With ``best_effort``
    a node whose attempts run out continues with its best sample and the
    partition is marked ``below_threshold``.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    if g.n == 0 or g.n % ell:
        raise DivisibilityError(f"part size {ell} does not divide n={g.n}")
    m = g.n // ell
    k = depth_for(m)
    delta = Fraction(min_degree(g, mode), g.n)
    blocks: list[tuple[int, ...]] = []
    reports: list[SplitReport] = []
    degraded = False

    def recurse(h: OrientedGraph, node_seed: int, path: str) -> None:
        nonlocal degraded
        parts = h.n // ell
        if parts == 1:
            blocks.append(h.labels)
            return
        n1 = (parts // 2) * ell
        try:
            w, report = random_split(h, n1, mode, node_seed, max_attempts, path=path)
        except AttemptsExhausted as exc:
            if not best_effort:
                raise exc.at(path)
            w, report = exc.best
            degraded = True
        reports.append(report)
        rest = sorted(set(range(h.n)).difference(w))
        recurse(induced(h, w), derive_seed(node_seed, "L"), path + "L")
        recurse(induced(h, rest), derive_seed(node_seed, "R"), path + "R")

    recurse(g, seed, "")
    return Partition(
        blocks=tuple(blocks),
        part_size=ell,
        reports=tuple(reports),
        delta=delta,
        k=k,
        bound_claimed=theoretical_bound(float(delta), ell, k),
        mode=mode,
        seed=seed,
        below_threshold=degraded,
    )


@dataclass
class PartitionVerdict:
    sizes_ok: bool
    disjoint: bool
    covering: bool
    relative_degrees: list[Fraction] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.sizes_ok and self.disjoint and self.covering

    def __bool__(self) -> bool:
        return self.ok


def verify_partition(g: OrientedGraph, p: Partition, mode: DegreeMode = DegreeMode.SEMI) -> PartitionVerdict:
    """Recheck the structure of ``p`` and measure every block's relative degree."""
    failures = []
    index = {label: i for i, label in enumerate(g.labels)}
    sizes_ok = all(len(b) == p.part_size for b in p.blocks)
    if not sizes_ok:
        failures.append(f"block sizes {[len(b) for b in p.blocks]} != {p.part_size}")
    seen: set[int] = set()
    disjoint = True
    for i, block in enumerate(p.blocks):
        if len(set(block)) != len(block) or seen.intersection(block):
            disjoint = False
            failures.append(f"block {i} repeats a vertex")
        seen.update(block)
    unknown = seen.difference(index)
    covering = not unknown and len(seen) == g.n
    if not covering:
        failures.append(f"blocks cover {len(seen)} known vertices of {g.n}, {len(unknown)} unknown ids")
    degrees = []
    for block in p.blocks:
        local = [index[v] for v in set(block) if v in index]
        if not local:
            degrees.append(Fraction(0))
            continue
        h = induced(g, local)
        degrees.append(Fraction(min_degree(h, mode), len(block)))
    return PartitionVerdict(sizes_ok, disjoint, covering, degrees, failures)

