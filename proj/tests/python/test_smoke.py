"""Smoke tests for the Python bindings.

Numerical depth lives in the C++ suite; these check that the binding layer
round-trips values, exposes the documented surface, and translates errors.
"""

import math

import pytest

import ntzone


def desk_model():
    return ntzone.Model(r=0.01, mu=[0.05], sigma=[[0.2]], gamma=2.0, beta=0.1)


def test_version_string():
    assert isinstance(ntzone.__version__, str) and ntzone.__version__


def test_frictionless_solution():
    m = desk_model()
    assert m.d == 1
    assert math.isclose(m.pi_m[0], 0.5, rel_tol=1e-14)
    assert math.isclose(m.c_m, 0.06, rel_tol=1e-14)
    assert math.isclose(m.v0, 2500.0 / 9.0, rel_tol=1e-13)
    assert math.isclose(m.value(1.0), -2500.0 / 9.0, rel_tol=1e-13)
    assert math.isclose(m.consumption_rate(4.0), 0.03625, rel_tol=1e-13)


def test_no_trade_region_and_loss():
    m = desk_model()
    assert math.isclose(m.u0(), 62.566787810553727, rel_tol=1e-11)
    assert m.riccati_residual() <= 1e-10

    ell = m.no_trade_matrix()
    assert math.isclose(ell[0][0], math.sqrt(8.0 / 3.0), rel_tol=1e-12)

    lo, hi = m.boundaries_1d(1.0, 1e-4)
    half = (1e-4) ** 0.25 / math.sqrt(ell[0][0])
    assert math.isclose(hi - m.pi_m[0], half, rel_tol=1e-10)
    assert math.isclose(m.pi_m[0] - lo, half, rel_tol=1e-10)

    assert m.contains([0.5], 1.0, 1e-4)
    assert not m.contains([0.9], 1.0, 1e-4)

    loss = m.certainty_equivalent_loss(1.0, 1e-4)
    assert math.isclose(loss, 0.002252404361179934, rel_tol=1e-11)
    assert m.equivalent_proportional_cost(1.0, 1e-4) > 0.0


def test_corrector_matches_region_coefficient():
    m = desk_model()
    c = m.corrector(1.0)
    assert set(c) == {"A", "B", "xi0", "a", "u0"}
    assert math.isclose(c["xi0"], 0.78254229003664366, rel_tol=1e-12)
    assert math.isclose(c["u0"], m.u0(), rel_tol=1e-10)


def test_two_assets():
    m = ntzone.Model(
        r=0.02, mu=[0.07, 0.07], sigma=[[0.4, 0.0], [0.0, 0.4]], gamma=2.0, beta=0.1
    )
    assert m.d == 2
    assert math.isclose(m.pi_m[0], m.pi_m[1], rel_tol=1e-13)
    M = m.no_trade_matrix()
    assert math.isclose(M[0][1], M[1][0], rel_tol=0.0, abs_tol=1e-14)
    assert m.riccati_residual() <= 1e-10
    pts = m.boundary_points(5e4, 3.41, n=32)
    assert len(pts) == 32 and all(len(p) == 2 for p in pts)
    assert m.contains(m.pi_m, 5e4, 3.41)


def test_simulate_shape_and_determinism():
    m = desk_model()
    kwargs = dict(z0=1.0, n_paths=32, seed=3, dt=1.0 / 252.0, horizon=2.0)
    out = m.simulate(1e-4, **kwargs)
    assert set(out) == {
        "j_hat",
        "stderr",
        "welfare_loss",
        "trades_per_year",
        "liquidation_fraction",
        "n_paths",
        "v_frictionless",
        "dt",
        "horizon",
    }
    assert out["n_paths"] == 32
    assert out["dt"] == 1.0 / 252.0
    assert out["horizon"] == 2.0
    assert out["j_hat"] < 0.0 and math.isfinite(out["j_hat"])
    assert out["stderr"] >= 0.0
    again = m.simulate(1e-4, **kwargs)
    assert again == out


def test_error_translation():
    with pytest.raises(ValueError):
        ntzone.Model(r=0.01, mu=[0.05, 0.06], sigma=[[0.2]], gamma=2.0, beta=0.1)
    with pytest.raises(ValueError):
        ntzone.Model(r=0.01, mu=[0.05], sigma=[[0.2]], gamma=-1.0, beta=0.1)
    with pytest.raises(ValueError):
        desk_model().simulate(1e-4, z0=0.0)
    # Fully invested Merton point: the no-trade region degenerates.
    with pytest.raises(RuntimeError):
        ntzone.Model(r=0.015625, mu=[0.140625], sigma=[[0.25]], gamma=2.0, beta=0.1)
