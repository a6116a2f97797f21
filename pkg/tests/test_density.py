"""Density representation: evaluation, summaries, Bayes update, windowing."""

import json
import math

import numpy as np
import pytest

from phasest import (
    DensityInvalid,
    EstimateUndefined,
    FourierDensity,
    ImpossibleOutcome,
    OrderBudgetExceeded,
    PhaseWindow,
)
from conftest import (
    TWO_PI,
    bayes_update_oracle,
    density_on_grid,
    entropy_oracle,
    grid_phis,
    random_density,
    wrapped_normal,
)

LN_TWO_PI = 1.8378770664093453  # ln(2 pi)


# -- construction and evaluation --------------------------------------------


def test_uniform_is_flat_one():
    d = FourierDensity.uniform()
    assert d.order == 0
    assert d.evaluate(0.0) == 1.0
    assert d.evaluate(2.1) == 1.0
    assert np.all(d.grid_values(8) == 1.0)


def test_constructor_rejects_bad_c0():
    with pytest.raises(DensityInvalid):
        FourierDensity([0.9, 0.1])
    with pytest.raises(DensityInvalid):
        FourierDensity([1.0 + 1e-6j, 0.1])


def test_constructor_rejects_oversized_harmonic():
    with pytest.raises(DensityInvalid):
        FourierDensity([1.0, 1.0 + 1e-9])


def test_evaluate_matches_cosine_series():
    # p(phi) = 1 + 2 Re{c1 e^{i phi}} for a single harmonic
    c1 = 0.3 - 0.1j
    d = FourierDensity([1.0, c1])
    for phi in (0.0, 0.7, 3.9, 6.1):
        expected = 1.0 + 2.0 * (c1 * np.exp(1j * phi)).real
        assert d.evaluate(phi) == pytest.approx(expected, abs=1e-15)


def test_grid_values_match_pointwise_evaluation():
    rng = np.random.default_rng(5)
    d = random_density(rng)
    n = 4 * (d.order + 1)
    got = d.grid_values(n)
    want = d.evaluate(grid_phis(n))
    assert np.allclose(got, want, atol=1e-12)


def test_grid_values_needs_enough_points():
    d = wrapped_normal(0.3, 0.5, 6)
    with pytest.raises(ValueError):
        d.grid_values(8)


# -- summaries ---------------------------------------------------------------


def test_sharpness_and_estimate_of_wrapped_normal():
    mu, sigma = 2.45, 0.3
    d = wrapped_normal(mu, sigma, 24)
    assert d.sharpness() == pytest.approx(math.exp(-0.5 * sigma * sigma), rel=1e-14)
    assert d.estimate() == pytest.approx(mu, abs=1e-12)


def test_estimate_undefined_on_uniform():
    with pytest.raises(EstimateUndefined):
        FourierDensity.uniform().estimate()


def test_holevo_variance():
    assert FourierDensity.uniform().holevo_variance() == math.inf
    sigma = 0.2
    d = wrapped_normal(1.0, sigma, 16)
    # |c1| = e^{-sigma^2/2}, so V = e^{sigma^2} - 1
    assert d.holevo_variance() == pytest.approx(math.expm1(sigma * sigma), rel=1e-12)


def test_entropy_uniform_is_log_two_pi():
    assert FourierDensity.uniform().entropy() == pytest.approx(LN_TWO_PI, abs=1e-12)


def test_entropy_matches_quadrature_oracle():
    rng = np.random.default_rng(11)
    for _ in range(5):
        d = random_density(rng)
        want = entropy_oracle(density_on_grid(d))
        assert d.entropy() == pytest.approx(want, abs=1e-9)


def test_validate_accepts_reachable_densities():
    rng = np.random.default_rng(3)
    for _ in range(5):
        random_density(rng).validate()


def test_validate_rejects_negative_reconstruction():
    # |c1| = 1 forces p(phi) = 1 + 2 cos(phi + arg) < 0 somewhere
    d = FourierDensity([1.0, 1.0])
    with pytest.raises(DensityInvalid):
        d.validate()


# -- Bayes update ------------------------------------------------------------


def test_uniform_update_frozen_values():
    # From a flat prior: prob is exactly 1/2 and the posterior k-th harmonic
    # is exactly (xi/2) e^{-i ctrl}; everything else stays zero.
    d = FourierDensity.uniform()
    for k in (1, 3):
        for ctrl in (0.0, 1.1):
            for xi in (1, -1):
                post, prob = d.updated(xi, ctrl, k, 1.0, 1.0)
                assert prob == 0.5
                assert post.order == k
                expected = 0.5 * xi * np.exp(-1j * ctrl)
                assert post.coeffs[k] == pytest.approx(expected, abs=1e-15)
                for n in range(1, k):
                    assert post.coeffs[n] == 0.0


def test_update_matches_grid_oracle():
    rng = np.random.default_rng(17)
    for _ in range(25):
        d = random_density(rng)
        k = int(rng.integers(1, 10))
        ctrl = float(rng.uniform(0.0, TWO_PI))
        sym = float(rng.uniform(0.3, 1.0))
        vis = float(rng.uniform(0.3, 1.0))
        xi = 1 if rng.random() < 0.5 else -1
        post, prob = d.updated(xi, ctrl, k, sym, vis)
        want_cc, want_prob = bayes_update_oracle(d, xi, ctrl, k, sym, vis)
        assert prob == pytest.approx(want_prob, abs=1e-12)
        m = min(post.order, d.order + k)
        assert np.allclose(post.coeffs[: m + 1], want_cc[: m + 1], atol=1e-10)
        # anything the update trimmed must have been negligible
        assert np.all(np.abs(want_cc[m + 1 :]) < 1e-12)


def test_update_order_grows_by_k_and_c0_stays_one():
    d = wrapped_normal(0.5, 0.6, 8)
    post, _ = d.updated(1, 0.2, 5, 0.9, 0.8)
    assert post.order <= 13
    assert post.coeffs[0] == 1.0


def test_update_with_zero_visibility_changes_nothing():
    d = wrapped_normal(1.2, 0.5, 10)
    post, prob = d.updated(1, 0.4, 3, 1.0, 0.0)
    assert prob == 0.5
    assert np.allclose(post.coeffs[: d.order + 1], d.coeffs, atol=1e-15)


def test_impossible_outcome_raises():
    # |c1| = 1 is not a valid density, but it drives P(-1) to exactly 0
    d = FourierDensity([1.0, 1.0])
    with pytest.raises(ImpossibleOutcome):
        d.updated(-1, 0.0, 1, 1.0, 1.0)


def test_order_budget_enforced():
    d = wrapped_normal(0.0, 0.4, 12)
    with pytest.raises(OrderBudgetExceeded):
        d.updated(1, 0.0, 5, 1.0, 1.0, max_order=16)


def test_update_rejects_bad_arguments():
    d = FourierDensity.uniform()
    with pytest.raises(ValueError):
        d.updated(0, 0.0, 1, 1.0, 1.0)
    with pytest.raises(ValueError):
        d.updated(1, 0.0, 0, 1.0, 1.0)
    with pytest.raises(ValueError):
        d.updated(1, 0.0, 1, 1.5, 1.0)


# -- window frame ------------------------------------------------------------


def test_lab_settings_frozen_example():
    w = PhaseWindow(4, math.pi / 2.0, FourierDensity.uniform())
    ctrl, k = w.lab_settings(0.0, 2)
    assert k == 8
    assert ctrl == 0.0  # 8 * pi/2 wraps to zero exactly


def test_lab_estimate_frozen_example():
    d = wrapped_normal(math.pi, 0.2, 16)
    w = PhaseWindow(4, 1.0, d)
    assert w.lab_estimate() == pytest.approx(1.0 + math.pi / 4.0, abs=1e-12)


def test_zoom_of_wrapped_normal_is_wider_wrapped_normal():
    # Keeping every second harmonic of N(mu, sigma) and recentering gives
    # exactly the coefficients of N(pi, 2 sigma) at half the order.
    mu, sigma = 1.9, 0.05
    d = wrapped_normal(mu, sigma, 128)
    w = PhaseWindow(1, 0.0, d)
    z = w.zoom(2)
    assert z.mag == 2
    assert z.density.order == 64
    want = wrapped_normal(math.pi, 2.0 * sigma, 64)
    assert np.allclose(z.density.coeffs, want.coeffs, atol=1e-12)
    # origin moves to put the old estimate mid-window
    assert z.origin == pytest.approx((mu - math.pi / 2.0) % TWO_PI, abs=1e-12)


def test_zoom_reproduces_density_values():
    # the acceptance-level fidelity statement, checked against the analytic
    # branch-sum form of the rescaled density (no Fourier series involved)
    sigma = math.pi / 64.0
    d = wrapped_normal(2.0, sigma, 192)
    z = PhaseWindow(1, 0.0, d).zoom(2)
    thetas = grid_phis(512)
    got = z.density.evaluate(thetas)
    s2 = 2.0 * sigma
    want = np.zeros_like(thetas)
    for j in range(-4, 5):
        want += np.exp(-0.5 * ((thetas - math.pi - j * TWO_PI) / s2) ** 2)
    want *= math.sqrt(TWO_PI) / s2
    mask = want > 1e-8
    assert np.max(np.abs(got[mask] - want[mask]) / want[mask]) < 1e-6


def test_zoom_then_lab_estimate_is_consistent():
    mu = 4.4
    d = wrapped_normal(mu, 0.04, 128)
    w = PhaseWindow(1, 0.0, d)
    z = w.zoom(2)
    assert z.lab_estimate() == pytest.approx(mu, abs=1e-10)


def test_zoom_demands_enough_order():
    w = PhaseWindow(1, 0.0, wrapped_normal(1.0, 0.5, 1))
    with pytest.raises(ValueError):
        w.zoom(2)


def test_zoom_rejects_bad_factor():
    w = PhaseWindow(1, 0.0, wrapped_normal(1.0, 0.2, 8))
    with pytest.raises(ValueError):
        w.zoom(1)


# -- serialization -----------------------------------------------------------


def test_json_round_trip():
    d = wrapped_normal(0.8, 0.3, 6)
    w = PhaseWindow(2, 1.25, d)
    text = w.to_json()
    obj = json.loads(text)
    assert set(obj) == {"M", "phi0", "coeffs"}
    back = PhaseWindow.from_json(text)
    assert back.mag == 2
    assert back.origin == 1.25
    assert np.array_equal(back.density.coeffs, d.coeffs)


def test_from_json_rejects_bad_magnification():
    with pytest.raises(ValueError):
        PhaseWindow.from_json(json.dumps({"M": 0, "phi0": 0.0, "coeffs": [[1.0, 0.0]]}))


def test_from_json_rejects_empty_coeffs():
    with pytest.raises(ValueError):
        PhaseWindow.from_json(json.dumps({"M": 1, "phi0": 0.0, "coeffs": []}))
