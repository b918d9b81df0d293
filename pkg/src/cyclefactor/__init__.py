"""Cycle-factors in oriented graphs via degree-preserving random equipartitions."""

from .graph import (
    DegreeMode,
    OrientedGraph,
    degree_into,
    derive_seed,
    induced,
    min_degree,
    random_oriented,
    random_tournament,
)
from .hamilton import (
    CycleEmbedding,
    OrientationPattern,
    canonicalize_pattern,
    find_cycle_backtrack,
    find_cycle_dp,
    theorem_threshold,
    verify_embedding,
)
from .partition import (
    Partition,
    random_split,
    recursive_equipartition,
    simplified_bound,
    theoretical_bound,
    verify_partition,
)
from .factor import FactorRequest, cycle_factor, threshold_report, verify_factor

__version__ = "0.1.0"
