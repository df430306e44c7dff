"""Smoke tests for the python bindings; the deep coverage lives in the C++
suites."""

import json
import math

import numpy as np
import pytest

import lsgan_lab as lab


def test_chi2_equivalence_on_small_pairs():
    p_d = [0.5, 0.5]
    p_g = [0.25, 0.75]
    chi2 = lab.pearson_chi2_mix(p_d, p_g)
    assert chi2 == pytest.approx(2.0 / 15.0, abs=1e-14)
    for a, b, c in [(-1.0, 1.0, 0.0), (0.0, 2.0, 1.0)]:
        value = lab.lsgan_value_at_optimum(p_d, p_g, a, b, c)
        assert abs(value - chi2) <= 1e-12
        assert lab.validate_coding(a, b, c)["chi2"]
    assert not lab.validate_coding(0.0, 1.0, 1.0)["chi2"]


def test_gan_value_matches_js():
    p = [0.2, 0.3, 0.5]
    q = [0.6, 0.1, 0.3]
    lhs = lab.gan_value_at_optimum(p, q)
    rhs = 2.0 * lab.js_divergence(p, q) - math.log(4.0)
    assert abs(lhs - rhs) <= 1e-12
    assert lab.gan_value_at_optimum(p, p) == pytest.approx(-math.log(4.0), abs=1e-12)


def test_optimal_discriminator_marks_unreachable_points():
    scores = lab.optimal_discriminator([0.5, 0.5, 0.0], [0.5, 0.5, 0.0], 0.0, 1.0)
    assert scores[0] == pytest.approx(0.5)
    assert scores[2] is None


def test_saturation_probe_endpoints():
    distances = list(range(11))
    ce = lab.saturation_probe("sigmoid_ce", [1.0, 0.0], distances)
    ls = lab.saturation_probe("least_squares", [1.0, 0.0], distances)
    assert ls[1] == 0.0
    assert abs(ls[10] - 9.0) <= 1e-12
    assert ce[10] < 1e-3
    assert all(ce[i] < ce[i - 1] for i in range(1, 11))


def test_sampling_and_density():
    points, labels = lab.sample_mixture(1000, seed=7)
    assert points.shape == (1000, 2)
    assert len(labels) == 1000
    again, _ = lab.sample_mixture(1000, seed=7)
    np.testing.assert_array_equal(points, again)

    z = lab.sample_latent(50, 16, "uniform", seed=3)
    assert z.shape == (50, 16)
    assert np.all(np.abs(z) <= 1.0)

    center_density = lab.true_density(2.0, 0.0)
    assert center_density == pytest.approx(7.9577, abs=1e-3)


def test_kde_and_mode_stats():
    points, _ = lab.sample_mixture(2000, seed=5)
    grid = lab.kde2d(points, bandwidth=0.1, resolution=64)
    assert grid.shape == (64, 64)
    assert np.all(grid >= 0.0)
    stats = lab.mode_stats(points)
    assert stats["modes_covered"] == 8
    assert stats["high_quality_fraction"] >= 0.98


def test_tiny_training_run_is_deterministic():
    cfg = json.loads(lab.default_config_json)
    cfg.update(
        {
            "total_g_steps": 8,
            "batch_size": 16,
            "hidden_width": 8,
            "latent_dim": 4,
            "snapshot_every": 4,
            "snapshot_samples": 32,
            "seed": 13,
        }
    )
    first = lab.train(json.dumps(cfg))
    second = lab.train(json.dumps(cfg))
    assert first["steps"] == 8
    assert not first["aborted"]
    assert first["runlog_csv"] == second["runlog_csv"]
    np.testing.assert_array_equal(first["final_samples"], second["final_samples"])


def test_config_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        lab.train("{\"batch_size\": -1}")
    with pytest.raises(ValueError):
        lab.pearson_chi2_mix([0.5, 0.6], [0.5, 0.5])
