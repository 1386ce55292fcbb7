"""Rank-correlation benchmark statistics for univariate components.

Kendall's tau is the tau-a form: (concordant - discordant) / (n(n-1)/2)
with tied pairs contributing zero and no tie correction. Spearman's rho
is the Pearson correlation of average ranks. The aggregate statistic for
mutual independence testing is the maximum of |tau| (or |rho|) over all
block pairs, fed to the permutation engine; under permutation calibration
any strictly monotone transform of the statistic gives the same test, so
the plain maximum is used. Pair counting is O(n^2).
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.stats import rankdata

from . import _engine
from .errors import LengthMismatch, TooFewRows, ZeroVariance
from .sample import ComponentizedSample

__all__ = ["RankStatKind", "kendall_tau", "spearman_rho", "hl_stat", "make_rank_evaluator"]


class RankStatKind(enum.Enum):
    """Max-|tau| and max-|rho| aggregate statistics over block pairs."""

    HL_TAU = "hl_tau"
    HL_RHO = "hl_rho"


def _paired(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape[0] != y.shape[0]:
        raise LengthMismatch(f"lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise TooFewRows(f"need at least 2 observations, got {x.shape[0]}")
    return x, y


def kendall_tau(x, y) -> float:
    """Kendall tau-a in [-1, 1]; ties contribute zero concordance."""
    x, y = _paired(x, y)
    n = x.shape[0]
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    return float((sx * sy).sum()) / (n * (n - 1))


def spearman_rho(x, y) -> float:
    """Pearson correlation of average ranks, in [-1, 1]."""
    x, y = _paired(x, y)
    rx = rankdata(x, method="average")
    ry = rankdata(y, method="average")
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    nx = np.linalg.norm(rx)
    ny = np.linalg.norm(ry)
    if nx == 0.0 or ny == 0.0:
        raise ZeroVariance("rank correlation undefined for a constant input")
    return float(rx @ ry) / (nx * ny)


def make_rank_evaluator(sample: ComponentizedSample, kind: RankStatKind):
    """Permutation-ready evaluator for an aggregate rank statistic."""
    if kind is RankStatKind.HL_TAU:
        return _engine.HLTauEvaluator(sample)
    return _engine.HLRhoEvaluator(sample)


def hl_stat(sample: ComponentizedSample, kind: RankStatKind) -> float:
    """Max over all block pairs of |tau| or |rho|; blocks must be univariate."""
    return make_rank_evaluator(sample, kind).value_and_scale(None)[0]
