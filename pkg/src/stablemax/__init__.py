"""Exact-arithmetic toolkit for maximizing additive and monotone submodular
set functions over downward-closed independence systems, with machinery to
measure perturbation stability and build non-stability certificates.

All values are `fractions.Fraction`; there are no tolerances anywhere.
"""

from stablemax.systems import (
    AbLowerBoundSystem,
    AtspSystem,
    CapExceededError,
    DependentSetError,
    ExplicitSystem,
    IndependenceSystem,
    KnapsackSystem,
    MatchingSystem,
    MatroidIntersection,
    PartitionMatroid,
    TwoSystemCounterexample,
    UniformMatroid,
)
from stablemax.objectives import (
    AdditiveObjective,
    BlockSumObjective,
    CoverageObjective,
    Objective,
    TableEntryMissingError,
    TableObjective,
    validate_objective,
)
from stablemax.analysis import (
    SystemProfile,
    hereditary_parameter,
    p_extendibility,
    p_system_parameter,
    profile_system,
    verify_hereditary_extendible_equivalence,
)
from stablemax.solvers import (
    LocalSearchConfig,
    OptimumResult,
    SolveTrace,
    all_local_optima,
    exact_optimum,
    greedy,
    greedy_alpha,
    is_local_optimum,
    local_search,
)
from stablemax.stability import (
    AdditivePerturbation,
    NonUniqueOptimumError,
    SequencePerturbation,
    StabilityReport,
    additive_stability_threshold,
    block_perturbation_certificate,
    build_sequence_perturbation,
    greedy_failure_certificate,
    local_search_failure_certificate,
    submodular_stability_upper_bound,
    validate_gamma_perturbation,
)

__version__ = "0.1.0"
