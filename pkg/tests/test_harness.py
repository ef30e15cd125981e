import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lazywalk as lw


def _close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + abs(a) + abs(b))


class TestStreamMoments:
    def test_empty(self):
        acc = lw.StreamMoments()
        assert acc.count == 0
        assert acc.variance() == 0.0

    def test_matches_numpy(self):
        rng = np.random.default_rng(5)
        xs = rng.normal(2.0, 3.0, size=2000)
        acc = lw.StreamMoments.from_samples(xs)
        assert acc.mean == pytest.approx(xs.mean(), rel=1e-12)
        assert acc.variance() == pytest.approx(xs.var(), rel=1e-10)
        cent = xs - xs.mean()
        assert acc.central_moment(3) == pytest.approx(np.mean(cent**3),
                                                      rel=1e-8, abs=1e-8)
        assert acc.central_moment(4) == pytest.approx(np.mean(cent**4),
                                                      rel=1e-8)

    def test_merge_equals_single_pass(self):
        rng = np.random.default_rng(6)
        xs = rng.exponential(size=1500)
        whole = lw.StreamMoments.from_samples(xs)
        a = lw.StreamMoments.from_samples(xs[:400])
        b = lw.StreamMoments.from_samples(xs[400:])
        merged = lw.merge_moments(a, b)
        assert merged.count == whole.count
        for attr in ("mean", "m2", "m3", "m4"):
            assert _close(getattr(merged, attr), getattr(whole, attr))

    def test_merge_with_empty(self):
        xs = [1.0, 2.0, 4.0]
        acc = lw.StreamMoments.from_samples(xs)
        out = lw.merge_moments(acc, lw.StreamMoments())
        assert (out.count, out.mean, out.m2) == (acc.count, acc.mean, acc.m2)
        out = lw.merge_moments(lw.StreamMoments(), acc)
        assert (out.count, out.mean, out.m2) == (acc.count, acc.mean, acc.m2)

    @settings(max_examples=200, deadline=None)
    @given(
        xs=st.lists(st.floats(-50, 50), min_size=0, max_size=40),
        ys=st.lists(st.floats(-50, 50), min_size=0, max_size=40),
        zs=st.lists(st.floats(-50, 50), min_size=0, max_size=40),
    )
    def test_merge_associative_commutative(self, xs, ys, zs):
        a = lw.StreamMoments.from_samples(xs)
        b = lw.StreamMoments.from_samples(ys)
        c = lw.StreamMoments.from_samples(zs)
        left = lw.merge_moments(lw.merge_moments(a, b), c)
        right = lw.merge_moments(a, lw.merge_moments(b, c))
        swapped = lw.merge_moments(b, a)
        ab = lw.merge_moments(a, b)
        tol = 1e-7
        for attr in ("mean", "m2", "m3", "m4"):
            assert _close(getattr(left, attr), getattr(right, attr), tol)
            assert _close(getattr(ab, attr), getattr(swapped, attr), tol)
        assert left.count == right.count == len(xs) + len(ys) + len(zs)


class TestKsNormal:
    def test_needs_samples(self):
        with pytest.raises(ValueError):
            lw.ks_normal(np.zeros(7))

    def test_point_mass_at_zero(self):
        # empirical cdf jumps to 1 at 0 while Phi(0) = 1/2
        res = lw.ks_normal(np.zeros(100))
        assert res.statistic == pytest.approx(0.5)
        assert res.p_value < 1e-10

    def test_accepts_standard_normal(self):
        rng = np.random.default_rng(8)
        res = lw.ks_normal(rng.standard_normal(5000))
        assert res.p_value > 0.01

    def test_rejects_shifted(self):
        rng = np.random.default_rng(9)
        res = lw.ks_normal(rng.normal(0.5, 1.0, size=5000))
        assert res.p_value < 1e-6

    def test_calibrated_rejection_rate(self):
        # at level 0.05 the test should reject ~5% of true-null datasets
        rng = np.random.default_rng(10)
        rejects = sum(
            lw.ks_normal(rng.standard_normal(300)).p_value < 0.05
            for _ in range(2000)
        )
        assert abs(rejects / 2000 - 0.05) < 0.015


class TestChiSquare:
    def test_exact_match_statistic_zero(self):
        exact = lw.exact_pmf(4, lw.WalkParams(p=0.5))
        counts = exact.mass * 10000
        res = lw.chi_square_gof(counts, exact)
        assert res.statistic == pytest.approx(0.0, abs=1e-18)
        assert res.p_value == pytest.approx(1.0)

    def test_shape_mismatch(self):
        exact = lw.exact_pmf(4, lw.WalkParams(p=0.5))
        with pytest.raises(ValueError):
            lw.chi_square_gof(np.ones(4), exact)

    def test_pooling_keeps_totals(self):
        # tiny expected tail bins must be pooled, not dropped
        exact = lw.exact_pmf(30, lw.WalkParams(p=0.2))
        rng = np.random.default_rng(12)
        draws = rng.choice(31, size=5000, p=exact.mass)
        counts = np.bincount(draws, minlength=31)
        res = lw.chi_square_gof(counts, exact)
        assert res.dof >= 1
        assert res.p_value > 1e-4

    def test_detects_wrong_law(self):
        exact = lw.exact_pmf(20, lw.WalkParams(p=0.5))
        wrong = lw.exact_pmf(20, lw.WalkParams(p=0.7))
        rng = np.random.default_rng(13)
        draws = rng.choice(21, size=20000, p=wrong.mass)
        counts = np.bincount(draws, minlength=21)
        res = lw.chi_square_gof(counts, exact)
        assert res.p_value < 1e-10


class TestCltDrivers:
    def test_requires_laziest(self):
        with pytest.raises(ValueError):
            lw.clt_experiment(lw.WalkParams(p=0.6, q=0.1), 10, 1000, 50, 0)

    def test_requires_long_horizon(self):
        with pytest.raises(ValueError):
            lw.clt_experiment(lw.WalkParams(p=0.6), 100, 5000, 50, 0)

    def test_self_normalized_smoke(self):
        res = lw.clt_experiment(lw.WalkParams(p=0.7), n=200, horizon=20000,
                                trials=400, seed=2)
        assert res.t_samples.shape == (400,)
        assert abs(res.t_samples.mean()) < 0.3
        assert 0.5 < res.t_samples.std() < 1.5

    def test_q_positive_requires_q(self):
        with pytest.raises(ValueError):
            lw.q_positive_clt_experiment(lw.WalkParams(p=0.5), 100, 50, 0)

    def test_q_positive_requires_subcritical_alpha(self):
        with pytest.raises(ValueError):
            lw.q_positive_clt_experiment(
                lw.WalkParams(p=0.8, q=0.2), 100, 50, 0)

    def test_q_positive_gaussian(self):
        prm = lw.WalkParams(p=0.6, q=0.3, s=1.0)
        res = lw.q_positive_clt_experiment(prm, n=5000, trials=2000, seed=3)
        assert res.ks.p_value > 0.01


class TestLilTracker:
    def _stat(self, n=20000, seed=4, p=0.5):
        prm = lw.WalkParams(p=p)
        cps = lw.walk.dyadic_checkpoints(n)
        return lw.simulate_counting(prm, n, seed, checkpoints=cps)

    def test_rejects_unknown_normalizer(self):
        with pytest.raises(ValueError):
            lw.lil_tracker(self._stat(), normalizer="sqrt")

    def test_needs_enough_checkpoints(self):
        prm = lw.WalkParams(p=0.5)
        st_ = lw.simulate_counting(prm, 50, 1, checkpoints=[50])
        with pytest.raises(ValueError):
            lw.lil_tracker(st_)

    def test_extrema_are_running(self):
        out = lw.lil_tracker(self._stat())
        assert np.all(np.diff(out.running_max) >= 0)
        assert np.all(np.diff(out.running_min) <= 0)
        assert np.all(out.running_max >= out.deviations)
        assert np.all(out.running_min <= out.deviations)

    def test_final_checkpoint_deviation_zero(self):
        # w is estimated at the final checkpoint, so the last normalized
        # deviation vanishes by construction
        out = lw.lil_tracker(self._stat())
        assert out.deviations[-1] == pytest.approx(0.0, abs=1e-12)

    def test_normalizers_agree_above_e(self):
        st_ = self._stat()
        a = lw.lil_tracker(st_, normalizer="phi")
        b = lw.lil_tracker(st_, normalizer="phi_hat")
        np.testing.assert_allclose(a.deviations, b.deviations, rtol=1e-12)
