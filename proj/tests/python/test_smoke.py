"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import gradwave as gw


def test_flat_density_end_to_end():
    field = gw.sample_catalog("quadratic1d", [4096])
    tau = gw.choose_tau(field, gw.grad_bound("quadratic1d"))
    density = gw.power_spectrum_density(field, tau)
    assert abs(density.prenorm_mass - 1.0) < 1e-9
    assert density.total_mass() == pytest.approx(1.0, abs=1e-9)
    assert density.mass_in_ball([0.3], 0.05) == pytest.approx(0.05, abs=0.005)
    assert density.value_at([0.0]) == pytest.approx(0.5, rel=0.05)


def test_choose_tau_matches_the_selection_rule():
    field = gw.sample_catalog("quadratic1d", [4096])
    tau = gw.choose_tau(field, 1.0, margin=1.5)
    assert tau == pytest.approx(1.5 * (2.0 / 4096) / math.pi)
    assert gw.nyquist_range(field, tau)[0] == pytest.approx(1.5)


def test_field_from_numpy_array():
    x = np.linspace(-1, 1, 256, endpoint=False) + 1.0 / 256
    field = gw.field_from_array(0.5 * x * x, [-1.0], [1.0])
    density = gw.power_spectrum_density(field, gw.choose_tau(field, 1.0))
    assert density.values.shape == (256,)
    assert density.total_mass() == pytest.approx(1.0, abs=1e-9)


def test_oracle_and_stationary_points():
    points = gw.stationary_points("cosine1d", [0.5])
    assert len(points) == 2
    assert points[0]["x"][0] == pytest.approx(7 * math.pi / 6)
    assert points[0]["signature"] == 1
    assert gw.analytic_density("cosine1d", [0.5]) == pytest.approx(
        1.0 / (math.pi * math.sqrt(0.75))
    )
    with pytest.raises(gw.DensityUndefinedError):
        gw.analytic_density("cosine1d", [1.0])


def test_estimator_concordance_via_bindings():
    lo, hi, bins = [-1.25], [1.25], [64]
    density, mask = gw.oracle_density_grid("quadratic1d", lo, hi, bins)
    field = gw.sample_catalog("quadratic1d", [4096])
    wave = gw.power_spectrum_density(field, gw.choose_tau(field, 1.0)).rebin(lo, hi, bins)
    mc = gw.monte_carlo_density("quadratic1d", 100_000, lo, hi, bins, seed=9)
    assert gw.l1_error(wave, density, mask) < 0.08
    assert gw.l1_error(wave, mc, mask) < 0.08


def test_histogram_and_charfn_agree_on_fd_gradients():
    field = gw.sample_catalog("quadratic1d", [2048])
    grads = gw.finite_diff_gradients(field)
    assert grads.shape == (2046, 1)
    lo, hi, bins = [-1.25], [1.25], [64]
    hist = gw.histogram_density(grads, lo, hi, bins)
    charfn = gw.charfn_density(grads, 1.0, 64, lo, hi, bins)
    assert charfn.clipped_mass <= 0.02
    assert gw.l1_error(hist, charfn) < 0.08


def test_decay_sweep_reports_a_passing_gate():
    taus = gw.geometric_taus(choose_max_tau(), 8)
    report = gw.decay_check("quadratic1d", 1 << 15, [1.5], taus)
    assert report["pass"]
    assert report["fit"]["slope"] >= 0.8


def choose_max_tau():
    field = gw.sample_catalog("quadratic1d", [1 << 15])
    return 128.0 * gw.choose_tau(field, 1.5, margin=1.5)
