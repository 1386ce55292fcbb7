import numpy as np
import pytest

from mutualdep.errors import (
    DimensionMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    NonFiniteEntry,
    TooFewRows,
)
from mutualdep.sample import (
    BlockSpec,
    concat_blocks,
    cyclic_shift_proxy,
    make_sample,
    pairwise_distances,
)

from oracles import oracle_cyclic_proxy, split_blocks


class TestMakeSample:
    def test_happy_path(self):
        s = make_sample(np.arange(12.0).reshape(4, 3), (1, 2))
        assert s.d == 2
        assert s.p == 3
        assert s.n == 4

    def test_width_mismatch(self):
        with pytest.raises(DimensionMismatch):
            make_sample(np.arange(12.0).reshape(4, 3), (2, 2))

    def test_non_finite(self):
        m = np.ones((4, 3))
        m[2, 1] = np.nan
        with pytest.raises(NonFiniteEntry):
            make_sample(m, (1, 2))
        m[2, 1] = np.inf
        with pytest.raises(NonFiniteEntry):
            make_sample(m, (1, 2))

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            make_sample(np.ones((1, 2)), (1, 1))

    def test_bad_block_widths(self):
        with pytest.raises(DimensionMismatch):
            BlockSpec((1, 0))
        with pytest.raises(DimensionMismatch):
            BlockSpec(())

    def test_immutability(self):
        s = make_sample(np.ones((3, 2)), (1, 1))
        with pytest.raises(ValueError):
            s.data[0, 0] = 5.0


class TestConcatBlocks:
    def setup_method(self):
        rng = np.random.default_rng(0)
        self.s = make_sample(rng.normal(size=(5, 6)), (1, 2, 3))

    def test_one_vs_right(self):
        out = concat_blocks(self.s, [[1], [2]])
        assert out.blocks.block_dims == (2, 3)
        np.testing.assert_array_equal(out.block(0), self.s.block(1))
        np.testing.assert_array_equal(out.block(1), self.s.block(2))

    def test_one_vs_others(self):
        out = concat_blocks(self.s, [[1], [0, 2]])
        assert out.blocks.block_dims == (2, 4)
        np.testing.assert_array_equal(
            out.block(1), np.hstack([self.s.block(0), self.s.block(2)])
        )

    def test_duplicate(self):
        with pytest.raises(DuplicateIndex):
            concat_blocks(self.s, [[0], [0, 2]])

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            concat_blocks(self.s, [[0], [3]])

    def test_preserves_rows_and_entries(self):
        out = concat_blocks(self.s, [[2], [0]])
        assert out.n == self.s.n
        assert sorted(out.block(0).ravel()) == sorted(self.s.block(2).ravel())


class TestPairwiseDistances:
    def test_scalar_pair(self):
        d = pairwise_distances(np.array([[0.0], [1.0]]))
        np.testing.assert_allclose(d.values, [[0.0, 1.0], [1.0, 0.0]])

    def test_three_four_five(self):
        d = pairwise_distances(np.array([[0.0, 0.0], [3.0, 4.0]]))
        assert d.values[0, 1] == 5.0

    def test_identical_rows(self):
        d = pairwise_distances(np.ones((4, 3)))
        assert np.all(d.values == 0.0)

    def test_translation_and_scaling(self):
        rng = np.random.default_rng(1)
        pts = rng.normal(size=(8, 3))
        base = pairwise_distances(pts).values
        shifted = pairwise_distances(pts + np.array([5.0, -2.0, 0.25])).values
        np.testing.assert_allclose(shifted, base, rtol=1e-12, atol=1e-12)
        scaled = pairwise_distances(3.5 * pts).values
        np.testing.assert_allclose(scaled, 3.5 * base, rtol=1e-12)

    def test_triangle_inequality_spot_check(self):
        rng = np.random.default_rng(2)
        d = pairwise_distances(rng.normal(size=(12, 4))).values
        for _ in range(200):
            i, j, k = rng.integers(0, 12, size=3)
            assert d[i, j] <= d[i, k] + d[k, j] + 1e-12

    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteEntry):
            pairwise_distances(np.array([[0.0], [np.nan]]))


class TestCyclicShiftProxy:
    def test_d1_identity(self):
        s = make_sample(np.arange(6.0).reshape(3, 2), (2,))
        np.testing.assert_array_equal(cyclic_shift_proxy(s), s.data)

    def test_n2_d2_swap(self):
        s = make_sample(np.array([[1.0, 10.0], [2.0, 20.0]]), (1, 1))
        np.testing.assert_array_equal(
            cyclic_shift_proxy(s), np.array([[1.0, 20.0], [2.0, 10.0]])
        )

    def test_index_formula_enumeration(self):
        s = make_sample(np.arange(9.0).reshape(3, 3), (1, 1, 1))
        expected = np.array(oracle_cyclic_proxy(split_blocks(s)))
        np.testing.assert_array_equal(cyclic_shift_proxy(s), expected)

    def test_n_fold_application_returns_to_start(self):
        rng = np.random.default_rng(3)
        s = make_sample(rng.normal(size=(5, 4)), (1, 2, 1))
        cur = s
        for _ in range(s.n):
            cur = make_sample(cyclic_shift_proxy(cur), s.blocks)
        np.testing.assert_array_equal(cur.data, s.data)
        # d*n applications land back at the start as well
        cur = s
        for _ in range(s.d * s.n):
            cur = make_sample(cyclic_shift_proxy(cur), s.blocks)
        np.testing.assert_array_equal(cur.data, s.data)

    def test_block_column_multisets_preserved(self):
        rng = np.random.default_rng(4)
        s = make_sample(rng.normal(size=(6, 5)), (2, 3))
        proxy = cyclic_shift_proxy(s)
        for j, sl in enumerate(s.blocks.slices()):
            got = np.sort(proxy[:, sl], axis=0)
            want = np.sort(s.data[:, sl], axis=0)
            np.testing.assert_array_equal(got, want)
