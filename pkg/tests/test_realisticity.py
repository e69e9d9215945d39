"""Tests for realisticity evaluation: exact, approximate, and sample-based."""

import inspect

import numpy as np
import pytest
from scipy.special import erf
from scipy.stats import norm

from ripath import (
    ConfigError,
    DegenerateSample,
    DimensionMismatch,
    GaussianErfApprox,
    GaussianExact,
    Kde,
    KdeEstimator,
    RealisticityModel,
    StandardNormal,
    UniformBox,
    UniformIndicator,
    kde_cdf,
    kde_fit,
    ri_estimate,
    ri_gaussian_erf_approx,
    ri_gaussian_exact,
    ri_uniform,
    semicircle_prior,
    silverman_bandwidth,
)


class TestGaussianExact:
    def test_two_dim_closed_form_on_grid(self):
        # in two dimensions the value reduces to exp(-|z|^2 / 2)
        rng = np.random.default_rng(11)
        Z = rng.uniform(-4.0, 4.0, size=(50, 2))
        expected = np.exp(-0.5 * np.sum(Z**2, axis=1))
        assert np.allclose(ri_gaussian_exact(Z, 2), expected, atol=1e-12)

    def test_value_at_origin_is_one(self):
        for dim in (1, 2, 7, 100):
            assert ri_gaussian_exact(np.zeros(dim), dim) == pytest.approx(1.0, abs=1e-15)

    def test_known_value_at_radius_two(self):
        assert ri_gaussian_exact([2.0, 0.0], 2) == pytest.approx(
            0.1353352832366127, abs=1e-15
        )

    def test_median_norm_gives_half(self):
        # |z|^2 = 2 ln 2 is the chi-squared(2) median
        r = np.sqrt(2.0 * np.log(2.0))
        assert r == pytest.approx(1.1774100225154747, abs=1e-15)
        assert ri_gaussian_exact([r, 0.0], 2) == pytest.approx(0.5, abs=1e-14)

    def test_strictly_decreasing_in_radius(self):
        radii = np.linspace(0.0, 5.0, 200)
        Z = np.column_stack([radii, np.zeros_like(radii), np.zeros_like(radii)])
        vals = ri_gaussian_exact(Z, 3)
        assert np.all(np.diff(vals) < 0.0)

    def test_rotation_invariance(self):
        theta = 0.7
        R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        z = np.array([1.3, -0.4])
        assert ri_gaussian_exact(R @ z, 2) == pytest.approx(
            ri_gaussian_exact(z, 2), abs=1e-14
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            ri_gaussian_exact([1.0, 2.0, 3.0], 2)


class TestGaussianErfApprox:
    def test_formula_at_reference_point(self):
        # D = 10, |z| = sqrt(9.5) - 3 off from sqrt(D - 1/2):
        # value is (1 + erf(3)) / 2
        dim = 10
        norm_z = np.sqrt(dim - 0.5) - 3.0
        z = np.zeros(dim)
        z[0] = norm_z
        assert ri_gaussian_erf_approx(z, dim) == pytest.approx(
            0.9999889547515006, abs=1e-15
        )
        assert ri_gaussian_erf_approx(z, dim) == pytest.approx(
            0.5 + 0.5 * erf(3.0), abs=1e-15
        )

    def test_clamped_to_unit_interval(self):
        assert ri_gaussian_erf_approx(np.zeros(1000), 1000) == 1.0
        far = np.full(10, 100.0)
        assert ri_gaussian_erf_approx(far, 10) == 0.0

    def test_max_deviation_small_in_high_dim(self):
        # frozen sweep: worst deviation from the exact value over a fine
        # radial grid in 20 dimensions is about 0.0104
        dim = 20
        radii = np.linspace(0.0, 12.0, 2000)
        Z = np.zeros((radii.size, dim))
        Z[:, 0] = radii
        dev = np.abs(ri_gaussian_erf_approx(Z, dim) - ri_gaussian_exact(Z, dim))
        assert dev.max() == pytest.approx(0.01043, abs=5e-4)
        assert dev.max() < 0.02


class TestUniformRealisticity:
    def test_inside_is_one_outside_is_zero(self):
        box = UniformBox([0.0, 0.0], [1.0, 2.0])
        assert ri_uniform([0.5, 1.0], box) == 1.0
        assert ri_uniform([1.5, 1.0], box) == 0.0

    def test_boundary_counts_as_inside(self):
        box = UniformBox([0.0, 0.0], [1.0, 2.0])
        assert ri_uniform([1.0, 2.0], box) == 1.0
        assert ri_uniform([0.0, 0.0], box) == 1.0

    def test_batch_shape(self):
        box = UniformBox([0.0], [1.0])
        out = ri_uniform(np.array([[0.5], [2.0], [-1.0]]), box)
        assert np.array_equal(out, [1.0, 0.0, 0.0])


class TestSilvermanBandwidth:
    def test_two_point_sample(self):
        # n = 2, values (0, 2): sd = sqrt(2), h = (4 / 6)^(1/5) sqrt(2)
        h = silverman_bandwidth(np.array([0.0, 2.0]))
        assert h == pytest.approx(1.304057514388989, abs=1e-14)
        assert h == pytest.approx((4.0 / 6.0) ** 0.2 * np.sqrt(2.0), abs=1e-14)

    def test_scale_equivariance(self):
        rng = np.random.default_rng(4)
        vals = rng.standard_normal(100)
        assert silverman_bandwidth(3.0 * vals) == pytest.approx(
            3.0 * silverman_bandwidth(vals), rel=1e-12
        )

    def test_degenerate_sample_rejected(self):
        with pytest.raises(DegenerateSample):
            silverman_bandwidth(np.full(10, 1.5))

    def test_single_point_rejected(self):
        with pytest.raises(DegenerateSample):
            silverman_bandwidth(np.array([1.0]))


class TestKdeCdf:
    def test_single_kernel_at_its_center(self):
        est = KdeEstimator(np.array([0.7]), bandwidth=1.0)
        assert est.cdf(0.7) == pytest.approx(0.5, abs=1e-15)

    def test_symmetric_pair_midpoint(self):
        est = KdeEstimator(np.array([0.0, 2.0]), bandwidth=1.0)
        # at x = 1 both kernels contribute symmetric values summing to 1
        assert est.cdf(1.0) == pytest.approx(0.5, abs=1e-15)

    def test_hand_computed_two_point_value(self):
        est = KdeEstimator(np.array([0.0, 2.0]), bandwidth=1.0)
        expected = 0.5 * (norm.cdf(0.5) + norm.cdf(-1.5))
        assert est.cdf(0.5) == pytest.approx(expected, abs=1e-15)

    def test_monotone_nondecreasing(self):
        rng = np.random.default_rng(9)
        lls = rng.standard_normal(200)
        est = KdeEstimator(lls, bandwidth=silverman_bandwidth(lls))
        xs = np.sort(rng.uniform(-6.0, 8.0, size=400))
        vals = est.cdf(xs)
        assert np.all(np.diff(vals) >= 0.0)

    def test_limits(self):
        est = KdeEstimator(np.array([0.0, 1.0, 2.0]), bandwidth=0.5)
        assert est.cdf(-1e6) == pytest.approx(0.0, abs=1e-300)
        assert est.cdf(1e6) == pytest.approx(1.0, abs=1e-15)

    def test_kde_cdf_function_matches_method(self):
        est = KdeEstimator(np.array([-1.0, 0.5, 3.0]), bandwidth=0.8)
        xs = np.array([-2.0, 0.0, 4.0])
        assert np.array_equal(kde_cdf(est, xs), est.cdf(xs))


class TestKdeFit:
    def test_default_sample_size_is_5000(self):
        assert inspect.signature(kde_fit).parameters["n"].default == 5000

    def test_fit_is_deterministic_per_seed(self):
        sn = StandardNormal(2)
        a = kde_fit(sn, n=100, seed=3)
        b = kde_fit(sn, n=100, seed=3)
        assert np.array_equal(a.log_likelihoods, b.log_likelihoods)
        assert a.bandwidth == b.bandwidth

    def test_bandwidth_follows_silverman_rule(self):
        sn = StandardNormal(2)
        est = kde_fit(sn, n=500, seed=0)
        assert est.bandwidth == pytest.approx(
            silverman_bandwidth(est.log_likelihoods), abs=1e-15
        )

    def test_uniform_prior_rejected_as_degenerate(self):
        # all in-support log densities are equal, so the spread is zero
        box = UniformBox([0.0, 0.0], [1.0, 1.0])
        with pytest.raises(DegenerateSample):
            kde_fit(box, n=50, seed=0)


class TestKdeAccuracy:
    def test_mode_estimate_matches_smoothing_bias_formula(self):
        # At the mode of a 2-D standard normal the exact value is 1, but the
        # kernel-smoothed estimator has expectation
        #   Phi(-u / h) + exp(-u + h^2 / 2) Phi(u / h - h)
        # at log-density offset u = |z|^2 / 2 = 0, which stays near 0.93 for
        # the bandwidth Silverman's rule picks at n = 5000. Assert agreement
        # with that expectation rather than with the unattainable exact value.
        sn = StandardNormal(2)
        model = RealisticityModel(Kde(kde_fit(sn, n=5000, seed=0), sn))
        h = model.backend.estimator.bandwidth
        expected = norm.cdf(0.0) + np.exp(h**2 / 2.0) * norm.cdf(-h)
        value = model.ri(np.zeros(2))
        assert value == pytest.approx(expected, abs=0.01)
        assert value < 0.95  # the bias is real: the estimate is not near 1

    def test_estimate_near_exact_away_from_mode(self):
        sn = StandardNormal(2)
        model = RealisticityModel(Kde(kde_fit(sn, n=5000, seed=0), sn))
        assert model.ri([2.0, 0.0]) == pytest.approx(0.1353352832366127, abs=0.05)

    def test_accuracy_improves_with_sample_size(self):
        # median absolute error at z = (1.2, 0) over 20 seeds shrinks as n
        # grows from 500 to 5000 (frozen medians 0.0189 and 0.0092)
        sn = StandardNormal(2)
        z = np.array([1.2, 0.0])
        truth = ri_gaussian_exact(z, 2)
        errs = {}
        for n in (500, 5000):
            errs[n] = np.median(
                [
                    abs(RealisticityModel(Kde(kde_fit(sn, n=n, seed=s), sn)).ri(z) - truth)
                    for s in range(20)
                ]
            )
        assert errs[5000] < errs[500]
        assert errs[5000] < 0.02

    def test_minus_inf_log_density_maps_to_zero(self):
        box = UniformBox([0.0, 0.0], [1.0, 1.0])
        est = KdeEstimator(np.array([0.0, 0.1, -0.2]), bandwidth=0.5)
        model = RealisticityModel(Kde(est, box))
        assert model.ri([5.0, 5.0]) == 0.0

    def test_semicircle_component_mean_beats_far_point(self):
        semi = semicircle_prior(2)
        model = RealisticityModel(Kde(kde_fit(semi, n=1000, seed=0), semi))
        assert model.ri([0.0, 0.0]) > model.ri([0.0, 20.0])

    def test_monotone_in_density_for_all_backends(self):
        # f(z1) <= f(z2) must imply ri(z1) <= ri(z2); the KDE estimate
        # is a nondecreasing transform of log density, so this holds up
        # to floating point there as well
        sn = StandardNormal(2)
        rng = np.random.default_rng(9)
        Z = rng.uniform(-4.0, 4.0, size=(200, 2))
        order = np.argsort(sn.log_pdf_batch(Z))  # increasing density
        exact_sorted = ri_gaussian_exact(Z, 2)[order]
        assert np.all(np.diff(exact_sorted) >= -1e-9)
        model = RealisticityModel(Kde(kde_fit(sn, n=5000, seed=0), sn))
        est_sorted = np.asarray(model.ri(Z))[order]
        # no estimate may fall below any lower-density estimate by more
        # than the sampling slack (none do: the transform is monotone)
        drop = np.max(np.maximum.accumulate(est_sorted) - est_sorted)
        assert drop <= 0.05

    def test_calibration_under_the_prior(self):
        # ri(Z) for Z ~ prior should be approximately Uniform(0, 1); compare
        # the empirical cdf of exact values with the uniform one
        sn = StandardNormal(2)
        Z = sn.sample(10000, seed=42)
        vals = np.sort(ri_gaussian_exact(Z, 2))
        grid = (np.arange(1, vals.size + 1)) / vals.size
        ks = np.abs(vals - grid).max()
        assert ks == pytest.approx(0.0101, abs=5e-3)
        assert ks < 0.03


class TestRealisticityModel:
    def test_alpha_scaling_and_floor(self):
        model = RealisticityModel(GaussianExact(2), alpha=0.5, floor_eps=1e-9)
        z = np.array([2.0, 0.0])
        assert model.ri_alpha(z) == pytest.approx(0.5 * 0.1353352832366127, abs=1e-16)
        far = np.array([60.0, 0.0])
        assert model.ri(far) == 0.0
        assert model.ri_alpha(far) == 1e-9

    def test_alpha_default_is_identity(self):
        model = RealisticityModel(GaussianExact(2))
        z = np.array([1.0, 1.0])
        assert model.ri_alpha(z) == model.ri(z)

    def test_batch_and_single_agree(self):
        model = RealisticityModel(GaussianErfApprox(5), alpha=0.7)
        Z = np.random.default_rng(2).standard_normal((6, 5))
        batch = model.ri_alpha(Z)
        assert np.array_equal(batch, [model.ri_alpha(z) for z in Z])

    def test_invalid_alpha_rejected(self):
        with pytest.raises(ConfigError):
            RealisticityModel(GaussianExact(2), alpha=0.0)
        with pytest.raises(ConfigError):
            RealisticityModel(GaussianExact(2), alpha=1.5)

    def test_invalid_floor_rejected(self):
        with pytest.raises(ConfigError):
            RealisticityModel(GaussianExact(2), floor_eps=0.0)
        with pytest.raises(ConfigError):
            RealisticityModel(GaussianExact(2), floor_eps=1e-3)

    def test_uniform_backend(self):
        box = UniformBox([-1.0, -1.0], [1.0, 1.0])
        model = RealisticityModel(UniformIndicator(box), alpha=0.5)
        assert model.ri([0.0, 0.0]) == 1.0
        assert model.ri_alpha([0.0, 0.0]) == 0.5
        assert model.ri_alpha([2.0, 0.0]) == 1e-9

    def test_ri_estimate_requires_kde_backend(self):
        model = RealisticityModel(GaussianExact(2))
        with pytest.raises(ConfigError):
            ri_estimate(model, np.zeros(2))

    def test_ri_estimate_on_kde_backend(self):
        semi = semicircle_prior(2)
        model = RealisticityModel(Kde(kde_fit(semi, n=200, seed=0), semi))
        val = ri_estimate(model, np.array([0.0, 0.0]))
        assert 0.0 <= val <= 1.0
        assert val == model.ri(np.array([0.0, 0.0]))


class TestKdeSerialization:
    def test_estimator_round_trip(self):
        est = kde_fit(StandardNormal(2), n=50, seed=6)
        clone = KdeEstimator.from_json(est.to_json())
        assert np.array_equal(clone.log_likelihoods, est.log_likelihoods)
        assert clone.bandwidth == est.bandwidth
        xs = np.linspace(-8.0, 2.0, 9)
        assert np.array_equal(clone.cdf(xs), est.cdf(xs))
