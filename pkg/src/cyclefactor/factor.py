"""Cycle-factors: equipartition the graph, then find one cycle per block."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import DegreeMode, OrientedGraph, induced, min_degree
from .hamilton import (
    DEFAULT_BUDGET,
    DEFAULT_DP_CAP,
    BudgetExhausted,
    CycleEmbedding,
    OrientationPattern,
    find_cycle_backtrack,
    find_cycle_dp,
    theorem_threshold,
    verify_embedding,
)
from .partition import (
    DEFAULT_MAX_ATTEMPTS,
    AttemptsExhausted,
    DivisibilityError,
    Partition,
    recursive_equipartition,
    verify_partition,
)

THREE_EIGHTHS = Fraction(3, 8)

# Float slack for comparisons that hold with equality at ell = 20^3 eps^-3.
BOUND_TOL = 1e-12


@dataclass
class FactorRequest:
    ell: int
    patterns: OrientationPattern | Sequence[OrientationPattern] | None = None
    mode: DegreeMode = DegreeMode.SEMI
    seed: int = 0
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    budget: int | None = DEFAULT_BUDGET
    dp_cap: int = DEFAULT_DP_CAP
    best_effort: bool = False
    threads: int = 1

    def patterns_for(self, m: int) -> list[OrientationPattern]:
        if self.patterns is None:
            pats = [OrientationPattern.directed(self.ell)] * m
        elif isinstance(self.patterns, OrientationPattern):
            pats = [self.patterns] * m
        else:
            pats = list(self.patterns)
            if len(pats) != m:
                raise ValueError(f"{len(pats)} patterns given for {m} parts")
        for p in pats:
            if len(p) != self.ell:
                raise ValueError(f"pattern {p} has length {len(p)}, expected {self.ell}")
        return pats


@dataclass
class FactorCertificate:
    partition: Partition
    embeddings: list[CycleEmbedding]
    guarantee_flags: list[bool]
    part_degrees: list[int]

    @property
    def below_threshold(self) -> bool:
        return self.partition.below_threshold


class FactorError(RuntimeError):
    """The pipeline stopped at ``stage`` (``partition``, ``not-found`` or ``budget``).

    ``part`` is the index of the failing block, if any; ``partition`` and
    ``embeddings`` keep whatever was finished (``None`` for parts not found).
    """

    def __init__(self, stage: str, message: str, *, part: int | None = None,
                 partition: Partition | None = None,
                 embeddings: list[CycleEmbedding | None] | None = None):
        super().__init__(message)
        self.stage = stage
        self.part = part
        self.partition = partition
        self.embeddings = embeddings or []


@dataclass
class _PartOutcome:
    embedding: CycleEmbedding | None = None
    exhausted: bool = False


def _search_part(h: OrientedGraph, pattern: OrientationPattern, req: FactorRequest) -> _PartOutcome:
    try:
        if h.n <= req.dp_cap:
            emb = find_cycle_dp(h, pattern, cap=req.dp_cap)
        else:
            emb = find_cycle_backtrack(h, pattern, budget=req.budget)
    except BudgetExhausted:
        return _PartOutcome(exhausted=True)
    return _PartOutcome(emb.relabel(h.labels) if emb is not None else None)


def cycle_factor(g: OrientedGraph, req: FactorRequest) -> FactorCertificate:
    """Cover ``g`` with vertex-disjoint cycles of length ``req.ell``.

    Block ``i`` of the equipartition receives pattern ``i``.  Blocks are
    searched in order of increasing minimum semi-degree so the likeliest
    failure surfaces first.  Raises :class:`FactorError` naming the stage
    that failed.
    """
    ell = req.ell
    if ell < 3:
        raise ValueError("cycles need ell >= 3")
    if g.n == 0 or g.n % ell:
        raise DivisibilityError(f"cycle length {ell} does not divide n={g.n}")
    m = g.n // ell
    patterns = req.patterns_for(m)
    try:
        part = recursive_equipartition(g, ell, req.mode, req.seed, req.max_attempts,
                                       best_effort=req.best_effort)
    except AttemptsExhausted as exc:
        raise FactorError("partition", str(exc)) from exc

    index = {label: i for i, label in enumerate(g.labels)}
    subgraphs = [induced(g, [index[v] for v in block]) for block in part.blocks]
    degrees = [min_degree(h, DegreeMode.SEMI) for h in subgraphs]
    order = sorted(range(m), key=lambda i: (degrees[i], i))

    if req.threads > 1:
        with ThreadPoolExecutor(max_workers=req.threads) as pool:
            futures = {i: pool.submit(_search_part, subgraphs[i], patterns[i], req) for i in order}
            outcomes = {i: futures[i].result() for i in order}
    else:
        outcomes = {}
        for i in order:
            outcomes[i] = _search_part(subgraphs[i], patterns[i], req)
            if outcomes[i].embedding is None:
                break

    found = [outcomes[i].embedding if i in outcomes else None for i in range(m)]
    for i in order:
        outcome = outcomes.get(i)
        if outcome is None:
            continue
        if outcome.exhausted:
            raise FactorError("budget", f"part {i}: search budget exhausted",
                              part=i, partition=part, embeddings=found)
        if outcome.embedding is None:
            raise FactorError("not-found", f"part {i}: no copy of {patterns[i]}",
                              part=i, partition=part, embeddings=found)

    flags = [d >= theorem_threshold(ell) for d in degrees]
    return FactorCertificate(part, found, flags, degrees)


@dataclass
class FactorVerdict:
    tiling_ok: bool
    blocks_match: bool
    embeddings_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.tiling_ok and self.blocks_match and self.embeddings_ok

    def __bool__(self) -> bool:
        return self.ok


def verify_factor(g: OrientedGraph, cert: FactorCertificate) -> FactorVerdict:
    """Independent recheck: tiling, block/embedding agreement, every arc."""
    structure = verify_partition(g, cert.partition)
    failures = list(structure.failures)
    blocks = cert.partition.blocks
    blocks_match = len(cert.embeddings) == len(blocks)
    if not blocks_match:
        failures.append(f"{len(cert.embeddings)} embeddings for {len(blocks)} blocks")
    embeddings_ok = blocks_match
    index = {label: i for i, label in enumerate(g.labels)}
    for i, (block, emb) in enumerate(zip(blocks, cert.embeddings)):
        if emb is None or set(emb.vertices) != set(block) or len(emb.vertices) != len(block):
            blocks_match = False
            failures.append(f"part {i}: embedding vertices differ from block")
            continue
        if any(v not in index for v in emb.vertices):
            embeddings_ok = False
            failures.append(f"part {i}: unknown vertex id")
            continue
        local = CycleEmbedding(tuple(index[v] for v in emb.vertices), emb.pattern)
        verdict = verify_embedding(g, local)
        if not verdict:
            embeddings_ok = False
            failures.append(f"part {i}: {verdict.reason} at position {verdict.index}")
    return FactorVerdict(structure.ok, blocks_match, embeddings_ok, failures)


def cube_term(eps: float) -> float:
    """``20^3 / eps^3``: the explicit part of the minimum cycle length."""
    return 20.0**3 / eps**3


def threshold_report(g: OrientedGraph, ell: int, eps: float) -> dict:
    """Where ``g`` and ``ell`` sit relative to the degree condition for a factor.

    The minimum cycle length is ``max(20^3 eps^-3, n0)`` where ``n0`` comes
    from the Hamilton-cycle theorem and has no explicit value; it stays
    symbolic here.
    """
    n = g.n
    relative = Fraction(min_degree(g, DegreeMode.SEMI), n) if n else Fraction(0)
    required = float(THREE_EIGHTHS) + eps
    per_part = float(THREE_EIGHTHS) + eps - 10.0 * ell ** (-1.0 / 3.0)
    per_part_target = float(THREE_EIGHTHS) + eps / 2.0
    ell_min = cube_term(eps)
    return {
        "n": n,
        "ell": ell,
        "eps": eps,
        "relative_semi_degree": float(relative),
        "required_relative_degree": required,
        "meets_degree": float(relative) >= required,
        "ell0": f"max({ell_min!r}, n0)",
        "ell0_cube_term": ell_min,
        "ell_at_least_cube_term": ell >= ell_min,
        "per_part_bound": per_part,
        "per_part_target": per_part_target,
        "per_part_ok": per_part >= per_part_target - BOUND_TOL,
        "hamilton_threshold": theorem_threshold(ell) if ell >= 3 else None,
        "divisible": n > 0 and n % ell == 0,
        "m": n // ell if ell else 0,
    }


def certificate_to_dict(cert: FactorCertificate) -> dict:
    return {
        "ell": cert.partition.part_size,
        "m": len(cert.embeddings),
        "below_threshold": cert.below_threshold,
        "parts": [
            {
                "block": list(block),
                "pattern": str(emb.pattern),
                "embedding": list(emb.vertices),
                "min_semi_degree": deg,
                "guaranteed_asymptotic": flag,
            }
            for block, emb, deg, flag in zip(cert.partition.blocks, cert.embeddings,
                                             cert.part_degrees, cert.guarantee_flags)
        ],
        "partition": cert.partition.to_dict(),
    }

