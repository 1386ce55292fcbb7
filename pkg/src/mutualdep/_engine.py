"""Internal evaluators shared by the public statistics and the permutation engine.

Every statistic here is a function of the per-block squared Euclidean
distance matrices of a sample. Permuting the rows of block j permutes the
rows and columns of its distance matrix, so a permutation replicate never
recomputes distances: evaluators precompute the per-block matrices once
and evaluate any replicate from index vectors.

Evaluators expose ``value_and_scale(perms)`` where ``perms`` is either
None (identity) or a list of d index arrays (entries may be None for
identity). ``scale`` is the sum of the magnitudes of the accumulated
terms, used by the public layer for its tiny-negative clamp threshold.
All accumulation is double precision through numpy's pairwise summation,
with a fixed reduction order, so results are bit-stable for fixed inputs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import pdist, squareform
from scipy.stats import rankdata

from .errors import (
    BlocksNotUnivariate,
    BudgetExceeded,
    NeedAtLeastTwoBlocks,
    WrongBlockCount,
    ZeroVariance,
)
from .sample import ComponentizedSample

# Cap on the element count of any temporary array in the chunked
# exhaustive sums (~16 MB of float64 per chunk).
_CHUNK_ELEMS = 2_000_000


def block_sq_dists(sample: ComponentizedSample) -> list[np.ndarray]:
    """Per-block squared Euclidean distance matrices."""
    out = []
    for x in sample.block_matrices():
        out.append(squareform(pdist(x, metric="sqeuclidean")))
    return out


def _pi(perms, j):
    if perms is None:
        return None
    return perms[j]


def _rows(m: np.ndarray, pi) -> np.ndarray:
    return m if pi is None else m[pi]


def _full(m: np.ndarray, pi) -> np.ndarray:
    return m if pi is None else m[pi][:, pi]


def _compose(pi, idx: np.ndarray) -> np.ndarray:
    return idx if pi is None else pi[idx]


def _dcov_terms(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    """The three averages entering the squared distance covariance.

    s1 = mean(a*b), s2 = mean(a)*mean(b), s3 = mean_k(rowmean_a * rowmean_b);
    the statistic is s1 + s2 - 2*s3.
    """
    n = a.shape[0]
    s1 = float((a * b).mean())
    s2 = float(a.mean()) * float(b.mean())
    s3 = float(a.mean(axis=1) @ b.mean(axis=1)) / n
    return s1, s2, s3


def dcov_sq_centered(a: np.ndarray, b: np.ndarray) -> float:
    """Double-centered inner-product route; independent O(n^2) cross-check."""
    ac = a - a.mean(axis=0, keepdims=True) - a.mean(axis=1, keepdims=True) + a.mean()
    bc = b - b.mean(axis=0, keepdims=True) - b.mean(axis=1, keepdims=True) + b.mean()
    return float((ac * bc).mean())


def _outer_sqrt_sum(vectors: list[np.ndarray]) -> float:
    """Sum of sqrt(v_0[i0] + ... + v_{d-1}[i_{d-1}]) over all index tuples.

    Chunked on the longest vector so no temporary exceeds _CHUNK_ELEMS.
    """
    vs = sorted(vectors, key=len, reverse=True)
    if len(vs) == 1:
        return float(np.sqrt(vs[0]).sum())
    rest = vs[-1]
    for v in vs[-2:0:-1]:
        rest = (v[:, None] + rest[None, :]).ravel()
    lead = vs[0]
    chunk = max(1, _CHUNK_ELEMS // max(1, rest.size))
    total = 0.0
    for k0 in range(0, lead.size, chunk):
        block = lead[k0 : k0 + chunk, None] + rest[None, :]
        total += float(np.sqrt(block).sum())
    return total


def _rowcoupled_sqrt_sum(mats: list[np.ndarray]) -> float:
    """Sum over k and over column tuples of sqrt(sum_j M_j[k, l_j]).

    The first index k is shared by all matrices (n^(d+1) terms for
    n x n inputs); chunked on k.
    """
    n = mats[0].shape[0]
    d = len(mats)
    if d == 1:
        return float(np.sqrt(mats[0]).sum())
    chunk = max(1, _CHUNK_ELEMS // (n**d))
    total = 0.0
    for k0 in range(0, n, chunk):
        c = min(chunk, n - k0)
        acc = mats[0][k0 : k0 + c].reshape((c, n) + (1,) * (d - 1))
        for j in range(1, d):
            shape = (c,) + (1,) * j + (n,) + (1,) * (d - 1 - j)
            acc = acc + mats[j][k0 : k0 + c].reshape(shape)
        total += float(np.sqrt(acc).sum())
    return total


class DcovEvaluator:
    """Squared distance covariance of a 2-block sample.

    Works on unsquared per-block distance matrices: permuting rows
    commutes with the elementwise square root, so replicates are pure
    gathers.
    """

    def __init__(self, sample: ComponentizedSample, budget: int | None = None):
        if sample.d != 2:
            raise WrongBlockCount(f"distance covariance needs 2 blocks, got {sample.d}")
        self.n = sample.n
        self.dist = [np.sqrt(m) for m in block_sq_dists(sample)]

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        a = _full(self.dist[0], _pi(perms, 0))
        b = _full(self.dist[1], _pi(perms, 1))
        s1, s2, s3 = _dcov_terms(a, b)
        return s1 + s2 - 2.0 * s3, abs(s1) + abs(s2) + 2.0 * abs(s3)


class QStarEvaluator:
    """Simplified (cyclic-proxy) complete measure; O(n^2) per evaluation."""

    def __init__(self, sample: ComponentizedSample, budget: int | None = None):
        self.n = sample.n
        self.d = sample.d
        self.d2 = block_sq_dists(sample)
        n = self.n
        self.shifts = [(np.arange(n) + j) % n for j in range(self.d)]

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        n = self.n
        w2 = np.zeros((n, n))
        c2 = np.zeros((n, n))
        p2 = np.zeros((n, n))
        for j, m in enumerate(self.d2):
            pi = _pi(perms, j)
            sigma = _compose(pi, self.shifts[j])
            rows = _rows(m, pi)
            w2 += rows if pi is None else rows[:, pi]
            c2 += rows[:, sigma]
            p2 += m[sigma][:, sigma]
        cross = float(np.sqrt(c2).mean())
        within = float(np.sqrt(w2).mean())
        proxy = float(np.sqrt(p2).mean())
        return 2.0 * cross - within - proxy, 2.0 * cross + within + proxy


def q_complete_required_terms(n: int, d: int) -> int:
    return n ** (2 * d)


class QCompleteEvaluator:
    """Complete measure as an exhaustive sum over index tuples.

    The product-of-marginals term ranges over all n^(2d) tuples; it is
    invariant under within-block row permutations and is computed once.
    Each evaluation then costs O(n^(d+1)).
    """

    def __init__(self, sample: ComponentizedSample, budget: int | None = None):
        self.n = sample.n
        self.d = sample.d
        required = q_complete_required_terms(self.n, self.d)
        if budget is not None and required > budget:
            raise BudgetExceeded(required, budget, "complete measure")
        self.d2 = block_sq_dists(sample)
        flat = [m.ravel() for m in self.d2]
        self._term3 = _outer_sqrt_sum(flat) / float(required)

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        n, d = self.n, self.d
        rows = [_rows(m, _pi(perms, j)) for j, m in enumerate(self.d2)]
        term1 = 2.0 * _rowcoupled_sqrt_sum(rows) / float(n ** (d + 1))
        w2 = np.zeros((n, n))
        for j, m in enumerate(self.d2):
            pi = _pi(perms, j)
            w2 += _full(m, pi)
        term2 = float(np.sqrt(w2).mean())
        value = term1 - term2 - self._term3
        return value, abs(term1) + abs(term2) + abs(self._term3)


def _one_vs_rest_groups(d: int, symmetric: bool) -> list[tuple[int, list[int]]]:
    """(c, partner-group) pairs: suffix groups, or complements when symmetric."""
    if d < 2:
        raise NeedAtLeastTwoBlocks(f"need at least 2 blocks, got {d}")
    if symmetric:
        return [(c, [j for j in range(d) if j != c]) for c in range(d)]
    return [(c, list(range(c + 1, d))) for c in range(d - 1)]


class PairSumDcovEvaluator:
    """Sum of squared distance covariances over block recombinations.

    symmetric=False sums block c against the blocks to its right
    (c = 0..d-2); symmetric=True sums block c against all other blocks
    (c = 0..d-1). The per-recombination terms are evaluated on stacked
    (d-ish, n, n) arrays so the cost per replicate is a handful of
    vectorized passes rather than O(d) separate ones.
    """

    def __init__(self, sample, budget: int | None = None, *, symmetric: bool):
        self.n = sample.n
        self.d = sample.d
        self.symmetric = symmetric
        _one_vs_rest_groups(self.d, symmetric)
        self.d2 = block_sq_dists(sample)

    @staticmethod
    def _stacked_terms(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
        # a, b: (c, n, n) stacks; the dcov terms for every slice at once
        n = a.shape[1]
        nn = float(n * n)
        s1 = np.einsum("cij,cij->c", a, b) / nn
        s2 = a.mean(axis=(1, 2)) * b.mean(axis=(1, 2))
        s3 = np.einsum("ci,ci->c", a.mean(axis=2), b.mean(axis=2)) / n
        value = float((s1 + s2 - 2.0 * s3).sum())
        scale = float((np.abs(s1) + np.abs(s2) + 2.0 * np.abs(s3)).sum())
        return value, scale

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        n, d = self.n, self.d
        d2p = np.empty((d, n, n))
        for j in range(d):
            d2p[j] = _full(self.d2[j], _pi(perms, j))
        if self.symmetric:
            partner2 = d2p.sum(axis=0)[None] - d2p
            a = np.sqrt(d2p)
        else:
            # partner of block c is the suffix sum over blocks c+1..d-1
            suffix = np.empty_like(d2p)
            suffix[d - 1] = d2p[d - 1]
            for c in range(d - 2, 0, -1):
                np.add(suffix[c + 1], d2p[c], out=suffix[c])
            partner2 = suffix[1:]
            a = np.sqrt(d2p[: d - 1])
        return self._stacked_terms(a, np.sqrt(partner2))


def _qstar_two_block(a2: np.ndarray, b2_rows_by, n: int) -> tuple[float, float]:
    """q* of a 2-block view given squared distance matrices (already permuted)."""
    a2_, b2_ = a2, b2_rows_by
    shift = (np.arange(n) + 1) % n
    w2 = a2_ + b2_
    c2 = a2_ + b2_[:, shift]
    p2 = a2_ + b2_[shift][:, shift]
    cross = float(np.sqrt(c2).mean())
    within = float(np.sqrt(w2).mean())
    proxy = float(np.sqrt(p2).mean())
    return 2.0 * cross - within - proxy, 2.0 * cross + within + proxy


class PairSumQStarEvaluator:
    """Sum of 2-block simplified complete measures over recombinations."""

    def __init__(self, sample, budget: int | None = None, *, symmetric: bool):
        self.n = sample.n
        self.d = sample.d
        self.symmetric = symmetric
        self.groups = _one_vs_rest_groups(self.d, symmetric)
        self.d2 = block_sq_dists(sample)

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        d2p = [_full(m, _pi(perms, j)) for j, m in enumerate(self.d2)]
        total_value = 0.0
        total_scale = 0.0
        for c, group in self.groups:
            b2 = np.zeros_like(d2p[0])
            for j in group:
                b2 += d2p[j]
            v, s = _qstar_two_block(d2p[c], b2, self.n)
            total_value += v
            total_scale += s
        return total_value, total_scale


class PairSumQCompleteEvaluator:
    """Sum of 2-block complete measures over recombinations; O(n^4) each."""

    def __init__(self, sample, budget: int | None = None, *, symmetric: bool):
        self.n = sample.n
        self.d = sample.d
        self.symmetric = symmetric
        self.groups = _one_vs_rest_groups(self.d, symmetric)
        per_summand = self.n**4
        if budget is not None and per_summand > budget:
            raise BudgetExceeded(per_summand, budget, "per-recombination complete measure")
        self.d2 = block_sq_dists(sample)

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        n = self.n
        d2p = [_full(m, _pi(perms, j)) for j, m in enumerate(self.d2)]
        total_value = 0.0
        total_scale = 0.0
        for c, group in self.groups:
            a2 = d2p[c]
            b2 = np.zeros_like(a2)
            for j in group:
                b2 += d2p[j]
            term1 = 2.0 * _rowcoupled_sqrt_sum([a2, b2]) / float(n**3)
            term2 = float(np.sqrt(a2 + b2).mean())
            term3 = _outer_sqrt_sum([a2.ravel(), b2.ravel()]) / float(n**4)
            total_value += term1 - term2 - term3
            total_scale += abs(term1) + abs(term2) + abs(term3)
        return total_value, total_scale


class U3Evaluator:
    """Plug-in estimate of the factorized-weight measure for exactly 3 blocks.

    The twelve expectation terms all reduce to elementwise products,
    row means, and grand means of the three per-block distance matrices,
    so each evaluation is O(n^2).
    """

    def __init__(self, sample, budget: int | None = None):
        if sample.d != 3:
            raise WrongBlockCount(f"this measure is defined for 3 blocks, got {sample.d}")
        self.n = sample.n
        self.dist = [np.sqrt(m) for m in block_sq_dists(sample)]

    @staticmethod
    def terms_from_dists(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> list[float]:
        """The twelve signed terms, in a fixed order; their sum is the statistic."""
        n = a.shape[0]
        ra, rb, rc = a.mean(axis=1), b.mean(axis=1), c.mean(axis=1)
        ma, mb, mc = float(a.mean()), float(b.mean()), float(c.mean())
        terms = [
            -float((a * b * c).mean()),
            +2.0 * float((ra * rb * rc).sum()) / n,
            -ma * mb * mc,
            +float((a * b).mean()),
            +float((a * c).mean()),
            +float((b * c).mean()),
            -2.0 * float((ra * rb).sum()) / n,
            -2.0 * float((ra * rc).sum()) / n,
            -2.0 * float((rb * rc).sum()) / n,
            +ma * mb,
            +ma * mc,
            +mb * mc,
        ]
        return terms

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        a, b, c = (_full(m, _pi(perms, j)) for j, m in enumerate(self.dist))
        terms = self.terms_from_dists(a, b, c)
        return math.fsum(terms), sum(abs(t) for t in terms)


def _require_univariate(sample: ComponentizedSample):
    if sample.d < 2:
        raise NeedAtLeastTwoBlocks(f"need at least 2 blocks, got {sample.d}")
    if any(w != 1 for w in sample.blocks.block_dims):
        raise BlocksNotUnivariate(
            f"rank statistics need 1-d blocks, got widths {sample.blocks.block_dims}"
        )


class HLTauEvaluator:
    """Max over block pairs of |Kendall tau-a|, for univariate blocks.

    tau of a pair is the Frobenius inner product of their sign matrices
    over n(n-1); a row permutation of a block permutes its sign matrix
    symmetrically, so replicates are gathers plus one small matmul.
    """

    def __init__(self, sample, budget: int | None = None):
        _require_univariate(sample)
        self.n = sample.n
        self.d = sample.d
        cols = [sample.block(j)[:, 0] for j in range(self.d)]
        self.signs = [np.sign(x[:, None] - x[None, :]) for x in cols]

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        n = self.n
        g = np.empty((self.d, n * n))
        for j, s in enumerate(self.signs):
            g[j] = _full(s, _pi(perms, j)).ravel()
        pair = (g @ g.T) / float(n * (n - 1))
        iu = np.triu_indices(self.d, k=1)
        stat = float(np.abs(pair[iu]).max())
        return stat, 1.0


class HLRhoEvaluator:
    """Max over block pairs of |Spearman rho|, for univariate blocks."""

    def __init__(self, sample, budget: int | None = None):
        _require_univariate(sample)
        self.n = sample.n
        self.d = sample.d
        z = np.empty((self.d, self.n))
        for j in range(self.d):
            r = rankdata(sample.block(j)[:, 0], method="average")
            r = r - r.mean()
            norm = np.linalg.norm(r)
            if norm == 0.0:
                raise ZeroVariance(f"block {j} is constant; rank correlation undefined")
            z[j] = r / norm
        self.z = z

    def value_and_scale(self, perms=None) -> tuple[float, float]:
        zp = np.empty_like(self.z)
        for j in range(self.d):
            pi = _pi(perms, j)
            zp[j] = self.z[j] if pi is None else self.z[j][pi]
        pair = zp @ zp.T
        iu = np.triu_indices(self.d, k=1)
        stat = float(np.abs(pair[iu]).max())
        return stat, 1.0
