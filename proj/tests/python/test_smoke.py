"""Smoke tests for the python bindings: one call per exposed family."""

import math

import pytest

import kicked


def test_thresholds_match_closed_forms():
    t = kicked.super_recurrence_thresholds(0.83, 0.4, 1.0)
    assert t["r_lower"] == pytest.approx(0.43 / 0.6)
    assert t["mu_upper"] == pytest.approx(1.0 / 1.4)
    assert t["delta"] > 0
    assert t["admissible_c"]


def test_weyl_sum_modulus_and_lock_in():
    r = kicked.weyl_sum([1.0], 1.0, [1], 50)
    assert r["abs"] == pytest.approx(1.0, abs=1e-9)
    r = kicked.weyl_sum([math.sqrt(2)], 1.3, [1], 10000, kicks="random", seed=42)
    assert r["abs"] < 0.05


def test_mean_square_diagonal_term():
    v = kicked.mean_square_weyl([math.sqrt(2)], [1], 1.0, 2.0, 100, grid=500,
                                kicks="random", seed=42, diagonal_only=True)
    assert v == pytest.approx(0.01, rel=1e-6)


def test_discrepancy():
    pts = [k / 100 for k in range(100)]
    assert kicked.discrepancy_1d(pts) == pytest.approx(0.01)


def test_burago_hits():
    scan = kicked.burago_scan(1, 100000)
    assert scan["hit_freq"] == pytest.approx(0.5, abs=1e-3)
    assert not scan["equidistributed"]


def test_unipotent_entries_satisfy_recursion():
    c = [0.3, -0.2, 0.7]
    s = kicked.evolve_unipotent(c, 1.5)
    assert s["alpha"][1] == pytest.approx(1.0)
    assert s["beta"][1] == pytest.approx(1.5)
    q = kicked.schrodinger_solve(c, 1.5, 1.0, 1.0, 3)
    assert q[0] == 1.0 and q[1] == 1.0


def test_escape_and_gauge():
    rep = kicked.escape_detector([1.0, -1.0], 10.0, k_max=1000)
    assert rep["escaped"]
    assert kicked.gauge_growth_slope([1.0, -1.0], 10.0, k_max=400) > 0


def test_trace_polynomial_exact_leading():
    unipotent = [[1, 1], [0, 1], [3, 4], [1, 1]]  # (1, 0; 3/4, 1)
    p = kicked.trace_polynomial([unipotent])
    assert p["degree"] == 1
    assert p["leading"] == "3/4"
    assert p["coeffs"][0] == "2"


def test_interval_cover():
    ks = kicked.interval_cover(0.37, 100000)
    assert ks and ks[0] == 1


def test_measure_of_ac():
    assert kicked.measure_of_ac(0.25) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        kicked.measure_of_ac(1.5)


def test_top_and_time_reversal():
    assert kicked.top_orbit_z_drift(1.37, 10000) <= 1e-10
    assert kicked.time_reversal_check("top", "reflect-xy-plane")["pass"]
    assert kicked.time_reversal_check("constant", "theta-x")["pass"]
    assert not kicked.time_reversal_check("top", "theta-x")["pass"]


def test_quasi_morphisms():
    p = kicked.qm_parabolic(w=5, n_max=8, pairs=20)
    assert p["r_infinity"] == pytest.approx(1.0, abs=1e-3)
    h = kicked.qm_hyperbolic("schottky", w=4, n_max=8)
    assert h["r_infinity"] == pytest.approx(1.0, abs=0.02)
    d = kicked.qm_hyperbolic("dihedral", w=4, n_max=8)
    assert d["time_reversal_detected"]
    assert abs(d["r_infinity"]) < 0.05


def test_flat_torus():
    assert abs(kicked.flat_birkhoff(0.8, 100000)) < 0.01
    rep = kicked.nonmixing_witness(0.8, delta=0.05, samples=200000)
    assert rep["separated"]
    assert rep["corr_odd"] == 0.0
    assert rep["corr_even"] == pytest.approx(0.05, rel=0.05)
