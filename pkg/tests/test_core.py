import math

import numpy as np
import pytest
from hypothesis import given, settings

import oracle
from strategies import datasets, random_dataset
from cumdev.core import (
    CumulativeCurve,
    Dataset,
    binned_full_means,
    cumulative_curve,
    cumulative_sums,
    kolmogorov_smirnov,
    kuiper,
    members_in_range,
    midpoint_bins,
    restrict_curve,
    shifted_ordinates,
    sigma_scale,
    summarize,
)
from cumdev.errors import InvalidInputError


def _curve(ordinates, sigma=0.0):
    n = len(ordinates)
    return CumulativeCurve(np.arange(1, n + 1) / n, ordinates, np.arange(n),
                           sigma)


class TestDataset:
    def test_rejects_unsorted_scores(self):
        with pytest.raises(InvalidInputError, match="strictly increasing"):
            Dataset([1.0, 1.0, 2.0], [0, 1, 0], [0])

    def test_rejects_empty_subpop(self):
        with pytest.raises(InvalidInputError, match="empty"):
            Dataset([1.0, 2.0], [0, 1], [])

    def test_rejects_bad_indices(self):
        with pytest.raises(InvalidInputError):
            Dataset([1.0, 2.0], [0, 1], [0, 2])
        with pytest.raises(InvalidInputError):
            Dataset([1.0, 2.0, 3.0], [0, 1, 1], [1, 0])

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(InvalidInputError, match="positive"):
            Dataset([1.0, 2.0], [0, 1], [0], weights=[1.0, 0.0])
        with pytest.raises(InvalidInputError, match="positive"):
            Dataset([1.0, 2.0], [0, 1], [0], weights=[1.0, -2.0])

    def test_rejects_length_mismatch(self):
        with pytest.raises(InvalidInputError, match="length"):
            Dataset([1.0, 2.0], [0, 1, 1], [0])

    def test_arrays_are_readonly(self, hand_example):
        with pytest.raises(ValueError):
            hand_example.scores[0] = 7.0


class TestMidpointBins:
    def test_two_members(self, hand_example):
        assert midpoint_bins(hand_example).tolist() == [-math.inf, 3.0, math.inf]

    def test_single_member(self):
        ds = Dataset([1.0, 2.0, 3.0], [0, 1, 0], [1])
        assert midpoint_bins(ds).tolist() == [-math.inf, math.inf]

    def test_three_members(self):
        ds = Dataset([0.1, 0.2, 0.6], [0, 1, 0], [0, 1, 2])
        np.testing.assert_allclose(midpoint_bins(ds)[1:-1], [0.15, 0.4])

    @given(datasets())
    def test_one_member_per_bin(self, ds):
        b = midpoint_bins(ds)
        sub = ds.scores[ds.subpop]
        for k in range(1, ds.n + 1):
            assert np.sum((b[k - 1] < sub) & (sub <= b[k])) == 1


class TestBinnedMeans:
    def test_hand_example(self, hand_example):
        rt = binned_full_means(hand_example, midpoint_bins(hand_example))
        np.testing.assert_allclose(rt, [1 / 3, 1.0], rtol=0, atol=1e-15)

    def test_identity_when_subpop_is_everyone(self):
        rng = np.random.default_rng(3)
        results = rng.normal(size=12)
        ds = Dataset(np.arange(12.0), results, np.arange(12))
        assert np.array_equal(binned_full_means(ds, midpoint_bins(ds)),
                              results)

    def test_singleton_bins_ignore_weights(self):
        ds = Dataset([1.0, 2.0], [0.0, 1.0], [0, 1], weights=[3.0, 1.0])
        rt = binned_full_means(ds, midpoint_bins(ds))
        assert rt.tolist() == [0.0, 1.0]


class TestCumulativeCurve:
    def test_hand_example(self, hand_example):
        c = cumulative_curve(hand_example)
        assert c.abscissae.tolist() == [0.5, 1.0]
        np.testing.assert_allclose(c.ordinates, [1 / 3, 1 / 3], atol=1e-15)
        assert c.sigma == pytest.approx(math.sqrt(2) / 6, abs=1e-15)
        assert not c.weighted

    def test_subpop_is_everyone_gives_zero_curve(self):
        rng = np.random.default_rng(5)
        ds = Dataset(np.arange(9.0), rng.normal(size=9), np.arange(9))
        c = cumulative_curve(ds)
        assert np.all(c.ordinates == 0)
        assert c.sigma == 0

    def test_constant_weights_match_unweighted(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            ds = random_dataset(rng, weighted=False)
            base = cumulative_curve(ds)
            heavy = cumulative_curve(Dataset(ds.scores, ds.results, ds.subpop,
                                             np.full(ds.m, 7.3)))
            assert np.array_equal(base.ordinates, heavy.ordinates)
            assert np.array_equal(base.abscissae, heavy.abscissae)
            assert base.sigma == heavy.sigma

    def test_forced_weighted_formulas_reduce(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            ds = random_dataset(rng, weighted=False)
            base = cumulative_curve(ds)
            forced = cumulative_curve(
                Dataset(ds.scores, ds.results, ds.subpop, np.full(ds.m, 7.3)),
                weighted=True)
            assert forced.weighted
            np.testing.assert_allclose(forced.ordinates, base.ordinates,
                                       rtol=0, atol=1e-15)
            np.testing.assert_allclose(forced.abscissae, base.abscissae,
                                       rtol=0, atol=1e-15)
            assert forced.sigma == pytest.approx(base.sigma, abs=1e-15)

    def test_last_abscissa_is_one(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            c = cumulative_curve(random_dataset(rng))
            assert abs(c.abscissae[-1] - 1) <= 1e-12
            assert np.all(np.diff(c.abscissae) > 0)

    def test_matches_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            ds = random_dataset(rng)
            w = None if not ds.has_varying_weights else ds.weights.tolist()
            args = (ds.scores.tolist(), ds.results.tolist(), ds.subpop.tolist())
            f, ft, a = oracle.cumulative(*args, w)
            c = cumulative_curve(ds)
            np.testing.assert_allclose(c.ordinates, np.subtract(f, ft),
                                       rtol=0, atol=1e-12)
            np.testing.assert_allclose(c.abscissae, a, rtol=0, atol=1e-12)
            assert c.sigma == pytest.approx(oracle.sigma(*args, w), abs=1e-12)
            sums = cumulative_sums(ds)
            np.testing.assert_allclose(sums.f, f, rtol=0, atol=1e-12)
            np.testing.assert_allclose(sums.f_tilde, ft, rtol=0, atol=1e-12)
            np.testing.assert_allclose(sums.abscissae, a, rtol=0, atol=1e-12)

    @given(datasets())
    def test_telescoping(self, ds):
        c = cumulative_curve(ds)
        rt = binned_full_means(ds, midpoint_bins(ds))
        diff = ds.results[ds.subpop] - rt
        if c.weighted:
            w = ds.weights[ds.subpop]
            expected = np.sum(w * diff) / np.sum(w)
        else:
            expected = np.mean(diff)
        assert c.ordinates[-1] == pytest.approx(expected, abs=1e-9)


class TestSigma:
    def test_hand_example(self, hand_example):
        b = midpoint_bins(hand_example)
        s = sigma_scale(hand_example, b, binned_full_means(hand_example, b))
        assert s == pytest.approx(0.5 * math.sqrt(2 / 9), abs=1e-15)
        assert s == pytest.approx(0.23570226, abs=1e-8)

    def test_zero_for_degenerate_binary_means(self):
        ds = Dataset([1.0, 2.0, 3.0, 4.0], [0, 0, 1, 1], [1, 2])
        b = midpoint_bins(ds)
        assert binned_full_means(ds, b).tolist() == [0.0, 1.0]
        assert sigma_scale(ds, b, binned_full_means(ds, b)) == 0

    def test_zero_for_singleton_bins_with_real_results(self):
        ds = Dataset([1.0, 2.0, 3.0], [0.3, 2.5, -1.0], [0, 1, 2])
        b = midpoint_bins(ds)
        assert sigma_scale(ds, b, binned_full_means(ds, b)) == 0

    def test_binary_override(self, hand_example):
        b = midpoint_bins(hand_example)
        rt = binned_full_means(hand_example, b)
        empirical = sigma_scale(hand_example, b, rt, binary=False)
        # bin 1 holds results 0, 1, 0 around mean 1/3; bin 2 holds only 1
        assert empirical == pytest.approx(0.5 * math.sqrt(2 / 9), abs=1e-15)

    def test_weighted_uses_squared_weights(self):
        ds = Dataset([1.0, 2.0, 3.0, 4.0], [0, 1, 0, 1], [1, 3],
                     weights=[1.0, 2.0, 1.0, 3.0])
        b = midpoint_bins(ds)
        rt = binned_full_means(ds, b)
        assert rt.tolist() == [0.5, 1.0]
        expected = math.sqrt(4 * 0.25 + 9 * 0.0) / 5
        assert sigma_scale(ds, b, rt) == pytest.approx(expected, abs=1e-15)


class TestStatistics:
    def test_hand_example(self, hand_example):
        c = cumulative_curve(hand_example)
        assert kolmogorov_smirnov(c) == pytest.approx(1 / 3, abs=1e-15)
        assert kuiper(c) == pytest.approx(1 / 3, abs=1e-15)

    def test_zero_curve(self):
        c = _curve([0.0, 0.0, 0.0])
        assert kolmogorov_smirnov(c) == 0
        assert kuiper(c) == 0

    def test_ks_takes_absolute_values(self):
        assert kolmogorov_smirnov(_curve([0.1, -0.4, 0.2])) == 0.4

    def test_kuiper_includes_origin(self):
        assert kuiper(_curve([0.2, -0.1])) == pytest.approx(0.3, abs=1e-15)
        assert kuiper(_curve([0.5, 0.7])) == pytest.approx(0.7, abs=1e-15)

    def test_summary_undefined_when_sigma_zero(self):
        s = summarize(_curve([0.0, 0.0]))
        assert s.g_normalized is None and s.d_normalized is None

    def test_summary_normalizes(self, hand_example):
        s = summarize(cumulative_curve(hand_example))
        assert s.g_normalized == pytest.approx(s.g / s.sigma)
        assert s.d_normalized == pytest.approx(s.d / s.sigma)
        assert s.n == 2

    @given(datasets())
    def test_ks_kuiper_sandwich(self, ds):
        c = cumulative_curve(ds)
        g, d = kolmogorov_smirnov(c), kuiper(c)
        assert g <= d + 1e-15
        assert d <= 2 * g + 1e-15

    @given(datasets())
    @settings(max_examples=60)
    def test_kuiper_shift_invariance(self, ds):
        c = cumulative_curve(ds)
        d = kuiper(c)
        for start in range(c.n + 1):
            shifted = shifted_ordinates(c, start)
            assert shifted[start] == 0
            assert np.ptp(shifted) == pytest.approx(d, abs=1e-12)

    def test_shift_matches_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            ds = random_dataset(rng)
            w = ds.weights.tolist() if ds.has_varying_weights else None
            c = cumulative_curve(ds)
            for start in range(ds.n + 1):
                ref = oracle.kuiper_from_start(
                    ds.scores.tolist(), ds.results.tolist(),
                    ds.subpop.tolist(), start, w)
                assert np.ptp(shifted_ordinates(c, start)) == pytest.approx(
                    ref, abs=1e-12)

    def test_shift_start_zero_is_plain_curve(self, hand_example):
        c = cumulative_curve(hand_example)
        assert shifted_ordinates(c, 0)[1:].tolist() == pytest.approx(
            c.ordinates.tolist(), abs=1e-15)

    def test_bad_shift_start(self, hand_example):
        with pytest.raises(InvalidInputError):
            shifted_ordinates(cumulative_curve(hand_example), 3)


class TestRestrict:
    def test_full_range_is_identical(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            ds = random_dataset(rng)
            a, b = cumulative_curve(ds), restrict_curve(ds, ds.n)
            assert np.array_equal(a.ordinates, b.ordinates)
            assert np.array_equal(a.abscissae, b.abscissae)
            assert a.sigma == b.sigma

    def test_hand_example_first_member(self, hand_example):
        c = restrict_curve(hand_example, 1)
        assert c.abscissae.tolist() == [1.0]
        assert c.ordinates[0] == pytest.approx(2 / 3, abs=1e-15)
        # only bin 1 with divisor 1
        assert c.sigma == pytest.approx(math.sqrt(2 / 9), abs=1e-15)

    def test_rescaling(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            ds = random_dataset(rng, weighted=False)
            full = cumulative_curve(ds)
            k = int(rng.integers(1, ds.n + 1))
            part = restrict_curve(ds, k)
            np.testing.assert_allclose(part.ordinates,
                                       full.ordinates[:k] * ds.n / k,
                                       rtol=0, atol=1e-12)

    def test_window_final_ordinate_is_mean_deviation(self):
        rng = np.random.default_rng(37)
        ds = random_dataset(rng, max_m=50, max_n=10, weighted=False)
        while ds.n < 4:
            ds = random_dataset(rng, weighted=False)
        rt = binned_full_means(ds, midpoint_bins(ds))
        c = restrict_curve(ds, ds.n - 1, k_min=2)
        expected = np.mean(ds.results[ds.subpop][1:-1] - rt[1:-1])
        assert c.ordinates[-1] == pytest.approx(expected, abs=1e-12)

    def test_out_of_range(self, hand_example):
        with pytest.raises(InvalidInputError):
            restrict_curve(hand_example, 0)
        with pytest.raises(InvalidInputError):
            restrict_curve(hand_example, 3)

    def test_members_in_range(self, hand_example):
        assert members_in_range(hand_example, 0, 10) == (1, 2)
        assert members_in_range(hand_example, 2, 3.5) == (1, 1)
        with pytest.raises(InvalidInputError):
            members_in_range(hand_example, 2.5, 3.5)
