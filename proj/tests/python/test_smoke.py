import math

import numpy as np
import pytest

import logdelta as ld


def test_branch_count_across_the_bifurcation():
    assert len(ld.solve_3s(1.5)) == 1
    assert len(ld.solve_3s(3.0)) == 3
    sym = [s for s in ld.stationary_states(3.0) if s.branch == "symmetric"][0]
    assert sym.t1 == pytest.approx(2.0 / 3.0, abs=1e-12)
    left = [s for s in ld.stationary_states(3.0) if s.branch == "asymmetric_left"][0]
    assert left.action < sym.action
    assert ld.d_gamma(3.0) == pytest.approx(left.action, rel=1e-15)


def test_bounds_chain():
    for g in (2.1, 3.0, 5.0):
        assert ld.dgamma_lower_bound(g) <= ld.d_gamma(g) < ld.d_zero() < ld.d_free()
    assert ld.d_free(0.0) == pytest.approx(math.e * math.sqrt(math.pi) / 2)


def test_sweep():
    pts = ld.bifurcation_sweep(1.5, 2.5, 11)
    assert [len(p.branches) for p in pts][:6] == [1] * 6
    assert len(pts[-1].branches) == 3


def test_profile_is_nearly_stationary():
    s = ld.stationary_states(2.0)[0]
    u = ld.sample_profile(s, 20.0, 2048)
    assert u.dtype == np.complex128 and u.shape == (2048,)
    r = ld.stationary_residual(u, 20.0, 2.0)
    assert r["interior"] < 1e-3
    rep = ld.report(u, 20.0, 2.0)
    assert abs(rep["nehari"]) < 1e-4 * rep["mass"]
    x = ld.grid_coordinates(20.0, 2048)
    assert x[1024] > 0 > x[1023]


def test_minimize_recovers_closed_form():
    r = ld.minimize(3.0, seed="left", nodes=2048)
    assert abs(r["value"] - ld.d_gamma(3.0)) < 1e-2 * ld.d_gamma(3.0)
    again = ld.minimize(3.0, seed=r["field"], nodes=2048)
    assert again["value"] == pytest.approx(r["value"], rel=1e-8)
    with pytest.raises(ld.ConvergenceError):
        ld.minimize(3.0, seed="left", nodes=1024, max_iter=1)
    with pytest.raises(ValueError):
        ld.minimize(3.0, seed="nowhere")


def test_evolve_conserves_mass():
    s = ld.stationary_states(2.0)[0]
    u = ld.sample_profile(s, 20.0, 512)
    out = ld.evolve(u, 20.0, 2.0, dt=1e-2, t_end=1.0, record_every=10, reference=s)
    assert out["t"].shape == (11,)
    assert np.max(np.abs(out["mass"] - out["mass"][0])) < 1e-10 * out["mass"][0]
    assert np.all(out["dist_sigma"] < 1e-2)


def test_stability_is_deterministic():
    kw = dict(branch="asymmetric_left", nodes=256, dt=1e-2, t_end=0.5, trials=2, record_every=5)
    a = ld.stability(3.0, **kw)
    b = ld.stability(3.0, threads=2, **kw)
    assert a["max_ratio"] == b["max_ratio"]
    assert not a["exploratory"]
    assert ld.stability(3.0, nodes=256, dt=1e-2, t_end=0.2, trials=1)["exploratory"]
