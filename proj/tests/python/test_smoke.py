"""Smoke tests for the python bindings."""

import math

import pytest

import fraclab


def test_version():
    assert fraclab.__version__


def test_constants():
    assert abs(fraclab.a_h(0.5) - 1.0) < 1e-8
    assert abs(fraclab.sigma2_w(1.0) - 2.0 / math.pi) < 1e-12
    assert abs(fraclab.sigma2_w(1.5) - 1.0 / 3.0) < 1e-12
    assert abs(fraclab.fbm_cov(0.5, 2.0, 3.0) - 2.0) < 1e-12
    assert abs(fraclab.r_lambda(0.5, 1.0) - math.exp(-0.5)) < 1e-10
    assert abs(fraclab.sigma_tilde2_b(0, [], 0.0, 0.5) - 4.0) < 1e-12
    assert abs(fraclab.brownian_sup_smallball_exact(50.0) - 1.0) < 1e-12


def test_kappa_known():
    exact = fraclab.kappa_known(0.5)
    assert exact["kind"] == "exact"
    assert abs(exact["value"] - math.pi**2 / 8) < 1e-12
    band = fraclab.kappa_known(1.5)
    assert band["kind"] == "bounds"
    assert band["lo"] == pytest.approx(0.375)
    assert fraclab.kappa_known(1.0)["kind"] == "unknown"


def test_sampling_shapes_and_determinism():
    grid = fraclab.TimeGrid.uniform(0.0, 1.0, 65)
    seed = fraclab.SeedSpec(12345, 0)
    p1 = fraclab.sample_fbm(0.7, grid, seed, 3)
    p2 = fraclab.sample_fbm(0.7, grid, seed, 3)
    p3 = fraclab.sample_fbm(0.7, grid, seed, 4)
    assert len(p1.values) == 65
    assert p1.values == p2.values
    assert p1.values != p3.values
    assert p1.values[0] == 0.0
    assert p1.index == pytest.approx(0.7)


def test_operators_roundtrip():
    grid = fraclab.TimeGrid.uniform(0.0, 1.0, 129)
    seed = fraclab.SeedSpec(7, 0)
    path = fraclab.sample_fbm(0.5, grid, seed, 0)
    integrated = fraclab.integrate(path)
    assert integrated.values[0] == 0.0
    assert integrated.index == pytest.approx(1.5)
    normalized = fraclab.normalize_self_similar(integrated, 1.0)
    assert normalized.index == pytest.approx(0.5)


def test_process_spec_validation():
    with pytest.raises(ValueError):
        fraclab.ProcessSpec(base="fbm", H=1.5)
    spec = fraclab.ProcessSpec(base="brownian", alphas=[0.5])
    assert spec.index == pytest.approx(1.0)


def test_estimate_prob():
    spec = fraclab.ProcessSpec(base="brownian")
    res = fraclab.estimate_prob(spec, 0.8, n_paths=4000, seed=11)
    exact = fraclab.brownian_sup_smallball_exact(0.8)
    assert res["p_hat"] == pytest.approx(exact, abs=5 * res["stderr"] + 0.01)


def test_urn():
    params = fraclab.rpw_params(0.7, 0.4)
    assert params["rho"] == pytest.approx(0.1)
    assert params["v"] == pytest.approx(2.0 / 3.0)
    ident = params["rho"] ** 2 * params["sigma1_sq"] + params["sigma2_sq"]
    assert ident == pytest.approx(params["sigma1_sq"], abs=1e-14)
    traj = fraclab.urn_simulate(0.5, 0.5, n=100, seed=3)
    assert len(traj["Y"]) == 101
    assert traj["Y"][0] == 1.0


def test_stationary_sampler_with_python_covariance():
    grid = fraclab.TimeGrid.uniform(0.0, 5.0, 129)
    path = fraclab.sample_stationary(lambda h: math.exp(-abs(h) / 2), grid, fraclab.SeedSpec(1, 2))
    assert len(path.values) == 129
    var = sum(v * v for v in path.values) / len(path.values)
    assert 0.5 < var < 2.0
