"""Monte Carlo checks of the hypergeometric tail bound and of split success."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .graph import DegreeMode, derive_seed, random_oriented, random_tournament
from .partition import AttemptsExhausted, random_split

MC_SLACK = 3.0
_CHUNK = 8192


@dataclass(frozen=True)
class TailParams:
    N: int
    n: int
    m: int
    t: float
    samples: int
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not (0 < self.n < self.N and 0 < self.m < self.N):
            raise ValueError("need 0 < n, m < N")
        if self.t < 0:
            raise ValueError("t must be non-negative")


@dataclass(frozen=True)
class ExperimentReport:
    """Empirical frequency against a bound.

    ``sense == "at_most"``: passes when ``empirical <= bound + slack * mc_sigma``.
    ``sense == "at_least"``: passes when ``empirical >= bound - slack * mc_sigma``.
    """

    hits: int
    trials: int
    bound: float
    mc_sigma: float
    sense: str = "at_most"
    slack: float = MC_SLACK

    @property
    def empirical(self) -> Fraction:
        return Fraction(self.hits, self.trials)

    @property
    def passed(self) -> bool:
        if self.sense == "at_most":
            return self.empirical <= self.bound + self.slack * self.mc_sigma
        return self.empirical >= self.bound - self.slack * self.mc_sigma

    def to_dict(self) -> dict:
        return {
            "hits": self.hits,
            "trials": self.trials,
            "empirical": float(self.empirical),
            "bound": self.bound,
            "mc_sigma": self.mc_sigma,
            "sense": self.sense,
            "slack": self.slack,
            "pass": self.passed,
        }


def mc_sigma(hits: int, trials: int) -> float:
    """Binomial standard error of the frequency ``hits / trials``."""
    freq = hits / trials
    return math.sqrt(freq * (1.0 - freq) / trials)


def _report(hits: int, trials: int, bound: float, sense: str = "at_most", slack: float = MC_SLACK) -> ExperimentReport:
    return ExperimentReport(hits, trials, bound, mc_sigma(hits, trials), sense, slack)


def tail_bound(n: int, t: float) -> float:
    """``2 exp(-2 t^2 / n)``: bound on ``P(|X - EX| >= t)`` for a size-``n`` draw."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    return 2.0 * math.exp(-2.0 * t * t / n)


def hypergeometric_samples(N: int, n: int, m: int, size: int, seed: int) -> np.ndarray:
    """``size`` independent draws of ``|S & [m]|`` for uniform size-``n`` subsets ``S`` of ``[N]``.

    Each draw runs the first ``n`` steps of a Fisher-Yates shuffle of
    ``0..N-1``; the shuffles are vectorised across draws.
    """
    if not (0 <= n <= N and 0 <= m <= N):
        raise ValueError("need 0 <= n, m <= N")
    rng = np.random.default_rng(seed)
    out = np.empty(size, dtype=np.int64)
    for start in range(0, size, _CHUNK):
        rows = min(_CHUNK, size - start)
        perm = np.tile(np.arange(N, dtype=np.int32), (rows, 1))
        r = np.arange(rows)
        for i in range(n):
            j = rng.integers(i, N, size=rows)
            a = perm[r, i].copy()
            perm[r, i] = perm[r, j]
            perm[r, j] = a
        out[start:start + rows] = (perm[:, :n] < m).sum(axis=1)
    return out


def sample_hypergeometric(N: int, n: int, m: int, seed: int) -> int:
    return int(hypergeometric_samples(N, n, m, 1, seed)[0])


def tail_experiment(p: TailParams) -> ExperimentReport:
    xs = hypergeometric_samples(p.N, p.n, p.m, p.samples, p.seed)
    mean = p.n * p.m / p.N
    hits = int((np.abs(xs - mean) >= p.t).sum())
    return _report(hits, p.samples, tail_bound(p.n, p.t))


def tail_grid(Ns=(100, 1000), samples: int = 100_000, seed: int = 0) -> list[tuple[TailParams, ExperimentReport]]:
    """n = N/2, m in {N/4, N/2}, t in {sqrt(n), n^(2/3)} for each N."""
    rows = []
    for N in Ns:
        n = N // 2
        for m in (N // 4, N // 2):
            for t in (math.sqrt(n), n ** (2.0 / 3.0)):
                p = TailParams(N, n, m, t, samples, derive_seed(seed, f"tail/{N}/{m}/{t!r}"))
                rows.append((p, tail_experiment(p)))
    return rows


def split_success_experiment(
    n: int,
    trials: int,
    mode: DegreeMode = DegreeMode.SEMI,
    seed: int = 0,
    p: float | None = None,
) -> ExperimentReport:
    """Fraction of single uniform halvings that clear the split threshold.

    The graph is a random tournament on ``n`` vertices, or a random oriented
    graph with edge probability ``p`` when given.  Each trial is one sample
    with a fresh derived seed; the report compares the rate with 1/2.
    """
    if n < 8 or n % 2:
        raise ValueError("n must be even and at least 8")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    graph_seed = derive_seed(seed, "graph")
    g = random_tournament(n, graph_seed) if p is None else random_oriented(n, p, graph_seed)
    hits = 0
    for trial in range(trials):
        try:
            random_split(g, n // 2, mode, derive_seed(seed, f"trial/{trial}"), max_attempts=1)
        except AttemptsExhausted:
            continue
        hits += 1
    return _report(hits, trials, 0.5, sense="at_least", slack=0.0)


def reports_to_csv(rows: list[tuple[TailParams, ExperimentReport]]) -> str:
    buf = io.StringIO()
    fields = ["N", "n", "m", "t", "samples", "seed", "empirical", "bound", "mc_sigma", "pass"]
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for params, rep in rows:
        row = asdict(params)
        row.update(empirical=float(rep.empirical), bound=rep.bound, mc_sigma=rep.mc_sigma, **{"pass": rep.passed})
        writer.writerow(row)
    return buf.getvalue()
