"""Measures and permutation tests of mutual dependence between random vectors.

A sample is an n x p matrix partitioned into d column blocks, one per
component. The package provides characteristic-function-based dependence
statistics (squared distance covariance, complete/simplified complete
measures, their pairwise-aggregate variants, and a factorized-weight
3-block measure), rank-based benchmarks, seeded permutation calibration,
a numerical-integration validation oracle, and a Monte Carlo size/power
harness with a CLI front end.
"""

from .errors import MutualDepError
from .inference import (
    PairwiseOutcome,
    PermutationPlan,
    PermutationTestOutcome,
    adaptive_B,
    pairwise_bonferroni,
    permutation_test,
    permute_blocks,
)
from .measures import (
    CostGuard,
    MeasureKind,
    MeasureResult,
    compute_measure,
    dcov_sq,
    i_star,
    i_sym,
    j_asym,
    j_star,
    q_complete,
    q_star,
    r_asym,
    s_sym,
    u3_plugin,
)
from .rankstats import RankStatKind, hl_stat, kendall_tau, spearman_rho
from .sample import (
    BlockSpec,
    ComponentizedSample,
    DistanceMatrix,
    concat_blocks,
    cyclic_shift_proxy,
    make_sample,
    pairwise_distances,
)

__version__ = "0.1.0"

__all__ = [
    "MutualDepError",
    "BlockSpec",
    "ComponentizedSample",
    "DistanceMatrix",
    "make_sample",
    "concat_blocks",
    "pairwise_distances",
    "cyclic_shift_proxy",
    "MeasureKind",
    "MeasureResult",
    "CostGuard",
    "compute_measure",
    "dcov_sq",
    "q_complete",
    "q_star",
    "r_asym",
    "s_sym",
    "j_asym",
    "i_sym",
    "j_star",
    "i_star",
    "u3_plugin",
    "RankStatKind",
    "kendall_tau",
    "spearman_rho",
    "hl_stat",
    "PermutationPlan",
    "PermutationTestOutcome",
    "PairwiseOutcome",
    "adaptive_B",
    "permute_blocks",
    "permutation_test",
    "pairwise_bonferroni",
    "__version__",
]
