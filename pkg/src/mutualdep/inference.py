"""Permutation calibration for any statistic in this package.

The null resample keeps block 0 in place and gives every other block an
independent uniform row permutation, which realizes the product of the
empirical marginals (any d-1 independent permutations do; fixing one
block saves work and keeps d = 2 identical to the classical two-sample
distance covariance permutation test).

Determinism contract: each replicate b draws its permutations from a
substream keyed by (seed, b), so outcomes are bit-identical across runs
and across thread counts, with or without ``parallel``.

The p-value convention is m/B with ties counted toward rejection
(replicate >= observed), so p = 0 is attainable and a constant sample
yields p = 1.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NeedAtLeastTwoBlocks
from .measures import CostGuard, MeasureKind, make_evaluator
from .rankstats import RankStatKind, make_rank_evaluator
from .sample import ComponentizedSample, concat_blocks

__all__ = [
    "PermutationPlan",
    "PermutationTestOutcome",
    "adaptive_B",
    "permute_blocks",
    "permutation_test",
    "PairwiseOutcome",
    "pairwise_bonferroni",
    "resolve_kind",
]


def adaptive_B(n: int) -> int:
    """Replicate count floor(200 + 5000/n); more replicates when n is small."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return int(math.floor(200.0 + 5000.0 / n))


def resolve_kind(name) -> "MeasureKind | RankStatKind":
    """Map a kind or its string name to the enum member."""
    if isinstance(name, (MeasureKind, RankStatKind)):
        return name
    try:
        return MeasureKind(name)
    except ValueError:
        pass
    try:
        return RankStatKind(name)
    except ValueError:
        known = [k.value for k in MeasureKind] + [k.value for k in RankStatKind]
        raise ValueError(f"unknown statistic {name!r}; known: {', '.join(known)}") from None


@dataclass(frozen=True)
class PermutationPlan:
    """Replicate count, master seed, and parallel-evaluation switch."""

    B: int
    seed: int
    parallel: bool = False

    def __post_init__(self):
        if self.B < 1:
            raise ValueError(f"B must be >= 1, got {self.B}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class PermutationTestOutcome:
    """Observed statistic, replicate statistics, and the exact-count p-value."""

    kind: str
    observed: float
    replicates: np.ndarray = field(repr=False)
    p_value: float
    B: int
    seed: int

    def __post_init__(self):
        reps = np.asarray(self.replicates, dtype=float)
        reps.setflags(write=False)
        object.__setattr__(self, "replicates", reps)


def _replicate_rng(seed: int, b: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(b,)))


def _draw_block_perms(n: int, d: int, rng: np.random.Generator) -> list:
    """Block 0 stays in place; blocks 1..d-1 get independent permutations."""
    perms: list = [None]
    for _ in range(1, d):
        perms.append(rng.permutation(n))
    return perms


def permute_blocks(sample: ComponentizedSample, rng: np.random.Generator) -> ComponentizedSample:
    """One null resample: independently permute the rows of blocks 1..d-1.

    Per-block marginal empirical distributions are unchanged; cross-block
    alignment is destroyed. For d = 1 the sample is returned unchanged.
    """
    if sample.d == 1:
        return sample
    perms = _draw_block_perms(sample.n, sample.d, rng)
    data = np.array(sample.data, copy=True)
    for j, sl in enumerate(sample.blocks.slices()):
        if perms[j] is not None:
            data[:, sl] = sample.data[perms[j], sl]
    return ComponentizedSample(data, sample.blocks)


def _evaluator_for(sample, kind, guard: CostGuard | None):
    if isinstance(kind, RankStatKind):
        return make_rank_evaluator(sample, kind)
    return make_evaluator(sample, kind, guard)


def permutation_test(
    sample: ComponentizedSample,
    kind,
    plan: PermutationPlan,
    guard: CostGuard | None = None,
) -> PermutationTestOutcome:
    """Calibrate a statistic by within-block permutation resampling.

    Evaluates the observed statistic, then B replicates on independent
    null resamples (replicate b uses the substream keyed by (seed, b)),
    and reports p = #(replicate >= observed) / B. BudgetExceeded from the
    statistic propagates before any replicate is computed.
    """
    kind = resolve_kind(kind)
    if sample.d < 2:
        raise NeedAtLeastTwoBlocks("permutation test needs at least 2 blocks")
    ev = _evaluator_for(sample, kind, guard)
    observed = ev.value_and_scale(None)[0]
    n, d, B = sample.n, sample.d, plan.B

    def one(b: int) -> float:
        rng = _replicate_rng(plan.seed, b)
        perms = _draw_block_perms(n, d, rng)
        return ev.value_and_scale(perms)[0]

    replicates = np.empty(B)
    if plan.parallel:
        with ThreadPoolExecutor() as pool:
            for b, v in enumerate(pool.map(one, range(B))):
                replicates[b] = v
    else:
        for b in range(B):
            replicates[b] = one(b)

    p_value = float((replicates >= observed).sum()) / B
    return PermutationTestOutcome(
        kind=kind.value,
        observed=observed,
        replicates=replicates,
        p_value=p_value,
        B=B,
        seed=plan.seed,
    )


@dataclass(frozen=True)
class PairwiseOutcome:
    """Per-pair distance covariance tests plus the corrected overall decision."""

    pairs: tuple  # of (i, j, PermutationTestOutcome)
    alpha: float
    threshold: float
    reject_any: bool


def pairwise_bonferroni(
    sample: ComponentizedSample,
    alpha: float,
    plan: PermutationPlan,
    guard: CostGuard | None = None,
) -> PairwiseOutcome:
    """Distance covariance permutation test on every block pair, with the
    significance level split as alpha / (number of pairs).

    Rejects the overall "no pairwise dependence" hypothesis when any
    pair's p-value falls strictly below the corrected threshold. All
    pairs use the same plan, hence the same permutation substreams.
    """
    if sample.d < 2:
        raise NeedAtLeastTwoBlocks("pairwise testing needs at least 2 blocks")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    results = []
    for i in range(sample.d):
        for j in range(i + 1, sample.d):
            pair = concat_blocks(sample, [[i], [j]])
            out = permutation_test(pair, MeasureKind.DCOV_SQ, plan, guard)
            results.append((i, j, out))
    threshold = alpha / len(results)
    reject = any(out.p_value < threshold for _, _, out in results)
    return PairwiseOutcome(
        pairs=tuple(results), alpha=alpha, threshold=threshold, reject_any=reject
    )
