"""Dependence statistics for block-partitioned samples.

All statistics compare the joint empirical characteristic function of a
sample against a surrogate built from its marginals, evaluated through
closed-form sums of Euclidean distances:

* ``dcov_sq``      squared distance covariance of two blocks, O(n^2);
* ``q_complete``   complete measure over all d blocks at once, an
                   exhaustive sum over up to n^(2d) index tuples;
* ``q_star``       its simplified form using the cyclic-shift surrogate,
                   O(n^2);
* ``r_asym`` / ``s_sym``    sums of squared distance covariances over
                   "one vs the rest on the right" / "one vs all others"
                   recombinations;
* ``j_asym`` / ``i_sym``    the same sums with the complete measure
                   plugged in (O(n^4) per summand);
* ``j_star`` / ``i_star``   the same sums with the simplified measure;
* ``u3_plugin``    the factorized-weight measure for exactly 3 blocks.

Sign convention: in the V-statistic identities for ``q_complete`` and
``q_star`` the within-sample average enters with a MINUS sign,

    Q = 2*mean|X^k - surrogate^l| - mean|X^k - X^l| - mean|surr^k - surr^l|.

This is the sign consistent with the defining nonnegative weighted-L2
integral and with the population identity
E|X - Xt'| + E|X' - Xt| - E|X - X'| - E|Xt - Xt'| (Xt the independent-
blocks surrogate). Some printed statements of these identities carry a
plus sign on the within-sample term; the minus sign implemented here is
the one certified by the numerical-integration oracle in the echf module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import _engine
from .sample import ComponentizedSample

__all__ = [
    "MeasureKind",
    "MeasureResult",
    "CostGuard",
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
    "compute_measure",
]


class MeasureKind(enum.Enum):
    """One member per statistic in this module."""

    DCOV_SQ = "dcov_sq"
    Q_COMPLETE = "q_complete"
    Q_STAR = "q_star"
    R_ASYM = "r_asym"
    S_SYM = "s_sym"
    J_ASYM = "j_asym"
    I_SYM = "i_sym"
    J_STAR = "j_star"
    I_STAR = "i_star"
    U3_PLUGIN = "u3_plugin"


@dataclass(frozen=True)
class CostGuard:
    """Budget for exhaustive index-tuple sums.

    ``q_complete`` refuses to run when n^(2d) exceeds the budget, and
    ``j_asym``/``i_sym`` when any per-recombination n^4 does; nothing is
    ever silently subsampled.
    """

    max_elementary_terms: int = 10**8

    def __post_init__(self):
        if self.max_elementary_terms < 1:
            raise ValueError("max_elementary_terms must be positive")


DEFAULT_GUARD = CostGuard()


@dataclass(frozen=True)
class MeasureResult:
    """A named statistic value with its context.

    Values within eps = 1e-9 * (sum of term magnitudes) below zero are
    rounding artifacts of cancellation; they are clamped to 0 and the
    clamp is recorded in ``cost_note``. Values below -eps are reported
    raw, with a note.
    """

    kind: MeasureKind
    value: float
    n: int
    d: int
    cost_note: str | None = None


def _finish(kind: MeasureKind, raw: float, scale: float, sample) -> MeasureResult:
    eps = 1e-9 * scale
    note = None
    value = raw
    if -eps <= raw < 0.0:
        value = 0.0
        note = f"clamped tiny negative ({raw:.3e}) to 0"
    elif raw < -eps:
        note = f"negative value beyond rounding tolerance ({raw:.3e}); interpret with care"
    return MeasureResult(kind=kind, value=value, n=sample.n, d=sample.d, cost_note=note)


def dcov_sq(sample: ComponentizedSample, *, check: bool = False) -> MeasureResult:
    """Squared distance covariance V^2 of a 2-block sample.

    Computed as s1 + s2 - 2*s3 from the two blocks' distance matrices
    (s1 the mean elementwise product, s2 the product of grand means,
    s3 the mean product of row means). With ``check=True`` the
    double-centered inner-product route is evaluated as well and must
    agree to 1e-10 relative.
    """
    ev = _engine.DcovEvaluator(sample)
    raw, scale = ev.value_and_scale()
    if check:
        other = _engine.dcov_sq_centered(ev.dist[0], ev.dist[1])
        tol = 1e-10 * max(1.0, abs(raw), abs(other))
        if abs(raw - other) > tol:
            raise AssertionError(
                f"distance covariance routes disagree: {raw!r} vs {other!r}"
            )
    return _finish(MeasureKind.DCOV_SQ, raw, scale, sample)


def q_complete(sample: ComponentizedSample, guard: CostGuard | None = None) -> MeasureResult:
    """Complete measure of mutual dependence, exhaustive over index tuples.

    Needs n^(2d) elementary distance terms and refuses (BudgetExceeded)
    beyond ``guard.max_elementary_terms``. Zero when d = 1.
    """
    guard = guard or DEFAULT_GUARD
    ev = _engine.QCompleteEvaluator(sample, guard.max_elementary_terms)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.Q_COMPLETE, raw, scale, sample)


def q_star(sample: ComponentizedSample) -> MeasureResult:
    """Simplified complete measure using the cyclic-shift surrogate, O(n^2)."""
    ev = _engine.QStarEvaluator(sample)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.Q_STAR, raw, scale, sample)


def r_asym(sample: ComponentizedSample) -> MeasureResult:
    """Sum over c of V^2(block c, blocks to its right); order-dependent."""
    ev = _engine.PairSumDcovEvaluator(sample, symmetric=False)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.R_ASYM, raw, scale, sample)


def s_sym(sample: ComponentizedSample) -> MeasureResult:
    """Sum over c of V^2(block c, all other blocks); block-order invariant."""
    ev = _engine.PairSumDcovEvaluator(sample, symmetric=True)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.S_SYM, raw, scale, sample)


def j_asym(sample: ComponentizedSample, guard: CostGuard | None = None) -> MeasureResult:
    """Sum over c of the complete measure of (block c, blocks to its right)."""
    guard = guard or DEFAULT_GUARD
    ev = _engine.PairSumQCompleteEvaluator(
        sample, guard.max_elementary_terms, symmetric=False
    )
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.J_ASYM, raw, scale, sample)


def i_sym(sample: ComponentizedSample, guard: CostGuard | None = None) -> MeasureResult:
    """Sum over c of the complete measure of (block c, all other blocks)."""
    guard = guard or DEFAULT_GUARD
    ev = _engine.PairSumQCompleteEvaluator(
        sample, guard.max_elementary_terms, symmetric=True
    )
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.I_SYM, raw, scale, sample)


def j_star(sample: ComponentizedSample) -> MeasureResult:
    """Sum over c of the simplified measure of (block c, blocks to its right)."""
    ev = _engine.PairSumQStarEvaluator(sample, symmetric=False)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.J_STAR, raw, scale, sample)


def i_star(sample: ComponentizedSample) -> MeasureResult:
    """Sum over c of the simplified measure of (block c, all other blocks)."""
    ev = _engine.PairSumQStarEvaluator(sample, symmetric=True)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.I_STAR, raw, scale, sample)


def u3_plugin(sample: ComponentizedSample, guard: CostGuard | None = None) -> MeasureResult:
    """Plug-in factorized-weight measure for exactly 3 blocks, O(n^2).

    Each of the twelve expectation terms is replaced by the matching
    all-index empirical mean. Triple-product terms scale cubically in a
    global data rescaling and pair terms quadratically, so the statistic
    is not homogeneous.
    """
    ev = _engine.U3Evaluator(sample)
    raw, scale = ev.value_and_scale()
    return _finish(MeasureKind.U3_PLUGIN, raw, scale, sample)


_EVALUATORS = {
    MeasureKind.DCOV_SQ: _engine.DcovEvaluator,
    MeasureKind.Q_COMPLETE: _engine.QCompleteEvaluator,
    MeasureKind.Q_STAR: _engine.QStarEvaluator,
    MeasureKind.R_ASYM: lambda s, b=None: _engine.PairSumDcovEvaluator(s, b, symmetric=False),
    MeasureKind.S_SYM: lambda s, b=None: _engine.PairSumDcovEvaluator(s, b, symmetric=True),
    MeasureKind.J_ASYM: lambda s, b=None: _engine.PairSumQCompleteEvaluator(s, b, symmetric=False),
    MeasureKind.I_SYM: lambda s, b=None: _engine.PairSumQCompleteEvaluator(s, b, symmetric=True),
    MeasureKind.J_STAR: lambda s, b=None: _engine.PairSumQStarEvaluator(s, b, symmetric=False),
    MeasureKind.I_STAR: lambda s, b=None: _engine.PairSumQStarEvaluator(s, b, symmetric=True),
    MeasureKind.U3_PLUGIN: _engine.U3Evaluator,
}


def make_evaluator(sample: ComponentizedSample, kind: MeasureKind, guard: CostGuard | None = None):
    """Internal-style factory: a reusable evaluator for permutation replicates."""
    guard = guard or DEFAULT_GUARD
    return _EVALUATORS[kind](sample, guard.max_elementary_terms)


def compute_measure(
    sample: ComponentizedSample, kind: MeasureKind, guard: CostGuard | None = None
) -> MeasureResult:
    """Compute any measure by kind."""
    ev = make_evaluator(sample, kind, guard)
    raw, scale = ev.value_and_scale()
    return _finish(kind, raw, scale, sample)
