"""Concentration oracles: fixtures, analytic anchors, negative controls."""

import json
import math

import numpy as np
import pytest

from prradar.oracles import (
    almost_orthogonality_failures,
    intersectivity_search,
    oracle_almost_orthogonality,
    oracle_intersectivity,
    oracle_slice_largeness,
    oracle_sqrt_cancellation,
    random_admissible_table,
    required_events,
    sample_unit_sphere,
)

PINNED_SEEDS = range(10)


# ---------------------------------------------------------- slice largeness


def test_slice_fixture_passes_on_pinned_seeds():
    # calibration: empirical rates 0.0014..0.0017 vs bound 0.0451
    for seed in PINNED_SEEDS:
        report = oracle_slice_largeness(16, 0.01, 100_000, seed)
        assert report.passed, f"seed {seed}: {report.empirical_rate}"
        assert report.claimed_bound == pytest.approx(math.sqrt(64 / math.pi) * 0.01)


def test_slice_rate_matches_beta_tail():
    # independent anchor: |alpha_1|^2 is Beta(1, r-1), so
    # P(|alpha_1| < eps) = 1 - (1 - eps^2)^(r-1)
    r, eps, samples = 16, 0.05, 100_000
    report = oracle_slice_largeness(r, eps, samples, seed=3)
    analytic = 1.0 - (1.0 - eps**2) ** (r - 1)
    se = math.sqrt(analytic * (1 - analytic) / samples)
    assert abs(report.empirical_rate - analytic) <= 4 * se


def test_slice_trivial_epsilon_passes():
    report = oracle_slice_largeness(16, 1.0, 1000, seed=0)
    assert report.empirical_rate == 1.0
    assert report.claimed_bound > 1.0
    assert report.passed


def test_slice_rejects_small_r_and_samples():
    with pytest.raises(ValueError, match="r >= 8"):
        oracle_slice_largeness(2, 0.01, 10_000, 0)
    with pytest.raises(ValueError, match="1000 samples"):
        oracle_slice_largeness(16, 0.01, 10, 0)
    with pytest.raises(ValueError, match="epsilon"):
        oracle_slice_largeness(16, 0.0, 10_000, 0)


def test_slice_negative_control_fails():
    # coordinate-biased sampling must be caught
    report = oracle_slice_largeness(16, 0.01, 20_000, 0, first_coord_scale=0.01)
    assert not report.passed
    assert report.empirical_rate > 0.9


# ----------------------------------------------------------- intersectivity


def test_required_events_values():
    assert required_events(4, 1.0) == 2  # floor((1 - 1/2) * 4)
    assert required_events(4, 2.0) == 3  # floor((1 - 1/4) * 4)
    assert required_events(9, 1.0) == 6  # floor((1 - 1/3) * 9)


def test_intersectivity_whole_space_events():
    weights = np.full(8, 1 / 8)
    table = np.ones((8, 4), dtype=bool)
    report = oracle_intersectivity(4, 1.0, weights, table)
    assert report.passed
    assert report.empirical_rate == 0.0
    assert report.detail["p_event"] == 1.0


def test_intersectivity_handcrafted_exact_enumeration():
    # four atoms; atom 3 (mass 0.1) is dropped from three of the four
    # events, each drop within the removable budget 4^(-1) = 0.25, so it
    # holds in only 1 < n(4,1) = 2 events: P(E) = 0.9 exactly
    weights = [0.4, 0.3, 0.2, 0.1]
    table = np.array(
        [
            [True, True, True, True],
            [True, True, True, True],
            [True, True, False, True],
            [False, False, True, False],
        ]
    )
    report = oracle_intersectivity(4, 1.0, weights, table)
    assert report.detail["p_event"] == pytest.approx(0.9, abs=1e-15)
    assert report.empirical_rate == pytest.approx(0.1, abs=1e-15)
    assert report.claimed_bound == 0.5
    assert report.passed


def test_intersectivity_rejects_hypothesis_violation():
    weights = np.full(4, 0.25)
    table = np.ones((4, 4), dtype=bool)
    table[:2, 0] = False  # event 0 has mass 0.5 < 1 - 4^(-1) = 0.75
    with pytest.raises(ValueError, match="hypothesis violated"):
        oracle_intersectivity(4, 1.0, weights, table)


def test_intersectivity_rejects_bad_weights_and_shapes():
    with pytest.raises(ValueError, match="sum to 1"):
        oracle_intersectivity(2, 1.0, [0.7, 0.7], np.ones((2, 2), dtype=bool))
    with pytest.raises(ValueError, match="shape"):
        oracle_intersectivity(3, 1.0, [0.5, 0.5], np.ones((2, 2), dtype=bool))


def test_random_admissible_tables_satisfy_hypothesis():
    rng = np.random.default_rng(0)
    for _ in range(50):
        weights, table = random_admissible_table(9, 1.0, 32, rng)
        col_mass = weights @ table
        assert np.all(col_mass >= 1 - 9 ** (-1.0) - 1e-12)


def test_intersectivity_search_no_counterexamples():
    report = intersectivity_search(9, 1.0, 64, 500, seed=0)
    assert report.passed
    assert report.detail["counterexamples"] == 0
    assert report.detail["worst_p_event"] >= 1 - 9 ** (-0.5)
    assert report.params["n_atoms"] == 64


# ----------------------------------------------------- almost orthogonality


def test_orthogonality_fixture_passes_on_pinned_seeds():
    # calibration: rates 0.0116..0.0145 vs bound exp(-0.5 * 8) = 0.0183
    for seed in PINNED_SEEDS:
        report = oracle_almost_orthogonality(64, 0.25, 1.0, 1.0, 256, 10_000, seed)
        assert report.passed, f"seed {seed}: {report.empirical_rate}"
        assert report.claimed_bound == pytest.approx(math.exp(-4.0))
        assert report.detail["n_vectors"] == 64


def test_orthogonality_zero_vectors_never_fail():
    rng = np.random.default_rng(1)
    alphas = sample_unit_sphere(16, 500, rng)
    z = np.zeros((10, 16), dtype=complex)
    assert not almost_orthogonality_failures(alphas, z, bound=1e-9).any()


def test_orthogonality_single_direction_matches_beta_tail():
    # a single test vector reduces the event to the marginal slice tail:
    # P(|alpha_1| >= r^(-1/2+delta)) = (1 - r^(2*delta - 1))^(r - 1)
    r, delta = 64, 0.25
    eps = r ** (-0.5 + delta)
    analytic = (1.0 - eps**2) ** (r - 1)
    rng = np.random.default_rng(12)
    hits = 0
    samples = 100_000
    for _ in range(5):
        alphas = sample_unit_sphere(r, samples // 5, rng)
        hits += int(np.sum(np.abs(alphas[:, 0]) >= eps))
    rate = hits / samples
    se = math.sqrt(analytic * (1 - analytic) / samples)
    assert abs(rate - analytic) <= 3 * se


def test_orthogonality_budget_rejected():
    with pytest.raises(ValueError, match="vector budget"):
        oracle_almost_orthogonality(64, 0.25, 4.0, 1.0, 256, 100, 0)


def test_orthogonality_norm_hypothesis_met_with_equality():
    report = oracle_almost_orthogonality(16, 0.25, 1.0, 2.0, 64, 100, 0)
    # the z draw is internal; re-derive it from the same seed to check norms
    rng = np.random.default_rng(0)
    z = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    z *= (2.0 * math.sqrt(16 / 64)) / np.linalg.norm(z, axis=1, keepdims=True)
    assert np.allclose(np.linalg.norm(z, axis=1) ** 2, 4.0 * 16 / 64, atol=1e-12)
    assert report.detail["inner_product_bound"] == pytest.approx(
        2.0 * 16**0.25 / 8.0
    )


# --------------------------------------------------- square-root cancellation


def test_sqrt_cancellation_passes_at_fixture():
    report = oracle_sqrt_cancellation(256, 0.0, 0.25, 1000, 100, seed=0)
    assert report.passed
    assert report.detail["violations"] == 0


def test_sqrt_cancellation_zero_margin_fails():
    # eps = 0 puts the bound at the noise scale itself: violations expected
    report = oracle_sqrt_cancellation(256, 0.0, 0.0, 1000, 50, seed=0)
    assert not report.passed
    assert report.empirical_rate > 0.5


def test_sqrt_cancellation_noise_off_trivially_passes():
    report = oracle_sqrt_cancellation(64, math.inf, 0.25, 100, 20, seed=0)
    assert report.passed
    assert report.empirical_rate == 0.0


def test_sqrt_cancellation_vector_budget():
    with pytest.raises(ValueError, match="N\\^2"):
        oracle_sqrt_cancellation(4, 0.0, 0.25, 17, 10, 0)


# ------------------------------------------------------------------ report


def test_report_json_roundtrip():
    report = oracle_slice_largeness(16, 0.01, 1000, seed=4)
    payload = json.loads(json.dumps(report.to_json_dict()))
    assert payload["lemma"] == "slice_largeness"
    assert payload["passed"] is True
    assert payload["seed"] == 4
    assert set(payload) == {
        "lemma",
        "params",
        "samples",
        "empirical_rate",
        "claimed_bound",
        "passed",
        "seed",
        "detail",
    }
