import numpy as np
import pytest

import oracles
from mutualdep.errors import BlocksNotUnivariate, LengthMismatch, ZeroVariance
from mutualdep.rankstats import RankStatKind, hl_stat, kendall_tau, spearman_rho
from mutualdep.sample import make_sample


class TestKendallTau:
    def test_perfect_concordance(self):
        assert kendall_tau([1, 2, 3], [1, 2, 3]) == 1.0

    def test_perfect_discordance(self):
        assert kendall_tau([1, 2, 3], [3, 2, 1]) == -1.0

    def test_one_swap_two_thirds(self):
        x = [1, 2, 3, 4]
        y = [1, 3, 2, 4]
        assert kendall_tau(x, y) == pytest.approx(2.0 / 3.0)
        assert kendall_tau(x, y) == pytest.approx(oracles.oracle_kendall_tau(x, y))

    def test_ties_contribute_zero(self):
        x = [1.0, 1.0, 2.0]
        y = [1.0, 2.0, 3.0]
        # pairs: (0,1) tied in x -> 0; (0,2) and (1,2) concordant -> 2/3
        assert kendall_tau(x, y) == pytest.approx(2.0 / 3.0)
        assert kendall_tau(x, y) == pytest.approx(oracles.oracle_kendall_tau(x, y))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            kendall_tau([1, 2], [1, 2, 3])

    def test_matches_oracle_randomized(self):
        rng = np.random.default_rng(0)
        for _ in range(25):
            n = int(rng.integers(2, 12))
            x = rng.integers(0, 6, size=n).astype(float)
            y = rng.integers(0, 6, size=n).astype(float)
            assert kendall_tau(x, y) == pytest.approx(
                oracles.oracle_kendall_tau(list(x), list(y)), abs=1e-12
            )


class TestSpearmanRho:
    def test_monotone(self):
        assert spearman_rho([1, 5, 9], [2, 3, 10]) == pytest.approx(1.0)

    def test_reversed(self):
        assert spearman_rho([1, 2, 3], [9, 5, 1]) == pytest.approx(-1.0)

    def test_one_swap_hand_value(self):
        x = [1, 2, 3, 4]
        y = [1, 3, 2, 4]
        # ranks equal the values; Pearson of (1,2,3,4) vs (1,3,2,4) = 0.8
        assert spearman_rho(x, y) == pytest.approx(0.8)
        assert spearman_rho(x, y) == pytest.approx(oracles.oracle_spearman_rho(x, y))

    def test_zero_variance(self):
        with pytest.raises(ZeroVariance):
            spearman_rho([1.0, 1.0, 1.0], [1, 2, 3])

    def test_matches_oracle_with_ties(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            n = int(rng.integers(3, 12))
            x = rng.integers(0, 4, size=n).astype(float)
            y = rng.integers(0, 4, size=n).astype(float)
            if len(set(x)) < 2 or len(set(y)) < 2:
                continue
            assert spearman_rho(x, y) == pytest.approx(
                oracles.oracle_spearman_rho(list(x), list(y)), abs=1e-12
            )


class TestHLStat:
    def test_d2_is_abs_tau_of_pair(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=10)
        y = rng.normal(size=10)
        s = make_sample(np.column_stack([x, y]), (1, 1))
        assert hl_stat(s, RankStatKind.HL_TAU) == pytest.approx(abs(kendall_tau(x, y)))
        assert hl_stat(s, RankStatKind.HL_RHO) == pytest.approx(abs(spearman_rho(x, y)))

    def test_monotone_pair_among_noise_gives_one(self):
        rng = np.random.default_rng(3)
        x = np.arange(12.0)
        data = np.column_stack([x, rng.normal(size=12), np.exp(x)])
        s = make_sample(data, (1, 1, 1))
        assert hl_stat(s, RankStatKind.HL_TAU) == 1.0
        assert hl_stat(s, RankStatKind.HL_RHO) == pytest.approx(1.0)

    def test_d3_max_of_hand_computed_pairs(self):
        rng = np.random.default_rng(4)
        cols = [rng.integers(0, 9, size=8).astype(float) for _ in range(3)]
        s = make_sample(np.column_stack(cols), (1, 1, 1))
        taus = [
            abs(oracles.oracle_kendall_tau(list(cols[i]), list(cols[j])))
            for i, j in [(0, 1), (0, 2), (1, 2)]
        ]
        assert hl_stat(s, RankStatKind.HL_TAU) == pytest.approx(max(taus), abs=1e-12)

    def test_rejects_multivariate_blocks(self):
        s = make_sample(np.random.default_rng(5).normal(size=(8, 3)), (2, 1))
        with pytest.raises(BlocksNotUnivariate):
            hl_stat(s, RankStatKind.HL_TAU)

    def test_invariant_under_monotone_transforms(self):
        rng = np.random.default_rng(6)
        cols = rng.normal(size=(15, 3))
        s = make_sample(cols, (1, 1, 1))
        transformed = np.column_stack(
            [np.exp(cols[:, 0]), cols[:, 1] ** 3, np.arctan(cols[:, 2])]
        )
        s2 = make_sample(transformed, (1, 1, 1))
        for kind in RankStatKind:
            assert hl_stat(s2, kind) == pytest.approx(hl_stat(s, kind), abs=1e-12)

    def test_invariant_under_block_reorder_and_row_permutation(self):
        rng = np.random.default_rng(7)
        cols = rng.normal(size=(12, 4))
        s = make_sample(cols, (1, 1, 1, 1))
        s_rows = make_sample(cols[rng.permutation(12)], (1, 1, 1, 1))
        s_blocks = make_sample(cols[:, [2, 0, 3, 1]], (1, 1, 1, 1))
        for kind in RankStatKind:
            base = hl_stat(s, kind)
            assert hl_stat(s_rows, kind) == pytest.approx(base, abs=1e-12)
            assert hl_stat(s_blocks, kind) == pytest.approx(base, abs=1e-12)

    def test_bounded_by_one(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(2, 15))
            d = int(rng.integers(2, 5))
            s = make_sample(rng.normal(size=(n, d)), (1,) * d)
            assert 0.0 <= hl_stat(s, RankStatKind.HL_TAU) <= 1.0
            assert 0.0 <= hl_stat(s, RankStatKind.HL_RHO) <= 1.0 + 1e-12
