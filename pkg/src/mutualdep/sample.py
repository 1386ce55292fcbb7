"""Block-partitioned samples and distance utilities.

A sample is an n x p matrix whose columns are tiled, in order and without
gaps, into d component blocks of widths p_1, ..., p_d. All statistics in
this package are pure functions of such a sample; samples are immutable
after construction so they can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import (
    DimensionMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    NonFiniteEntry,
    TooFewRows,
)

__all__ = [
    "BlockSpec",
    "ComponentizedSample",
    "DistanceMatrix",
    "make_sample",
    "concat_blocks",
    "pairwise_distances",
    "cyclic_shift_proxy",
]


@dataclass(frozen=True)
class BlockSpec:
    """Widths p_1, ..., p_d of the column blocks of a sample."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(w) for w in self.block_dims)
        if len(dims) < 1:
            raise DimensionMismatch("need at least one block")
        if any(w < 1 for w in dims):
            raise DimensionMismatch(f"block widths must be >= 1, got {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def d(self) -> int:
        """Number of component blocks."""
        return len(self.block_dims)

    @property
    def p(self) -> int:
        """Total number of columns."""
        return sum(self.block_dims)

    def slices(self) -> list[slice]:
        """Column slice for each block, tiling 0..p in order."""
        out, start = [], 0
        for w in self.block_dims:
            out.append(slice(start, start + w))
            start += w
        return out


@dataclass(frozen=True)
class ComponentizedSample:
    """An immutable n x p matrix of finite reals with a block partition.

    ``data`` is copied and marked read-only; n >= 2 and the block widths
    must sum to the column count.
    """

    data: np.ndarray
    blocks: BlockSpec

    def __post_init__(self):
        arr = np.array(self.data, dtype=float, copy=True)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d matrix, got ndim={arr.ndim}")
        if arr.shape[0] < 2:
            raise TooFewRows(f"need at least 2 rows, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise NonFiniteEntry(
                f"non-finite entry at row {bad[0]}, column {bad[1]}"
            )
        if arr.shape[1] != self.blocks.p:
            raise DimensionMismatch(
                f"matrix has {arr.shape[1]} columns but blocks sum to {self.blocks.p}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.blocks.d

    @property
    def p(self) -> int:
        return self.blocks.p

    def block(self, j: int) -> np.ndarray:
        """Read-only view of block j (0-based)."""
        if not 0 <= j < self.d:
            raise IndexOutOfRange(f"block index {j} outside 0..{self.d - 1}")
        return self.data[:, self.blocks.slices()[j]]

    def block_matrices(self) -> list[np.ndarray]:
        return [self.data[:, s] for s in self.blocks.slices()]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative distance matrix with zero diagonal."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"distance matrix must be square, got {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def make_sample(matrix, block_dims) -> ComponentizedSample:
    """Validate and wrap a matrix with its block partition.

    ``block_dims`` may be a BlockSpec or a sequence of positive widths.
    Rejects non-finite entries, fewer than two rows, and any width
    mismatch between the matrix and the partition.
    """
    blocks = block_dims if isinstance(block_dims, BlockSpec) else BlockSpec(tuple(block_dims))
    return ComponentizedSample(np.asarray(matrix), blocks)


def concat_blocks(sample: ComponentizedSample, groups) -> ComponentizedSample:
    """Recombine selected blocks into a new sample with super-blocks.

    ``groups`` is an ordered sequence of groups of 0-based block indices;
    each group becomes one block of the result, its columns concatenated
    in the given order. Selecting [[c], [c+1, ..., d-1]] builds the
    "one versus the rest on the right" two-block layout, and
    [[c], [0, ..., c-1, c+1, ..., d-1]] the "one versus all others" one.
    """
    groups = [list(g) for g in groups]
    flat = [j for g in groups for j in g]
    for j in flat:
        if not 0 <= j < sample.d:
            raise IndexOutOfRange(f"block index {j} outside 0..{sample.d - 1}")
    if len(set(flat)) != len(flat):
        raise DuplicateIndex(f"duplicate block index in {groups}")
    if not flat:
        raise DimensionMismatch("no blocks selected")
    mats = sample.block_matrices()
    cols = np.hstack([mats[j] for j in flat])
    dims = tuple(sum(sample.blocks.block_dims[j] for j in g) for g in groups)
    return ComponentizedSample(cols, BlockSpec(dims))


def pairwise_distances(points) -> DistanceMatrix:
    """Euclidean distance matrix of the rows of ``points``.

    Exact double-precision norms; entry (k, l) is |row_k - row_l|, the
    diagonal is zero and the result is symmetric.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if not np.all(np.isfinite(pts)):
        raise NonFiniteEntry("points contain non-finite entries")
    if pts.shape[0] == 1:
        return DistanceMatrix(np.zeros((1, 1)))
    return DistanceMatrix(squareform(pdist(pts)))


def cyclic_shift_proxy(sample: ComponentizedSample) -> np.ndarray:
    """Surrogate rows mimicking a draw from the product of marginals.

    Row k of the result takes block j from row (k + j) mod n of the
    original sample (0-based), i.e. block 0 is unshifted, block 1 shifted
    by one, and so on with wraparound. For d = 1 this is the identity.
    """
    n = sample.n
    out = np.empty_like(sample.data)
    for j, sl in enumerate(sample.blocks.slices()):
        idx = (np.arange(n) + j) % n
        out[:, sl] = sample.data[idx, sl]
    return out
