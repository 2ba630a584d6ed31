import cmath
import math

import pytest
import scipy.special as sp

import glancing


def test_bessel_pair_matches_scipy():
    for nu, x in [(0.5, 1.3), (10.0, 12.0), (50.0, 40.0)]:
        j, jp, y, yp = glancing.bessel_pair(nu, x)
        assert j == pytest.approx(sp.jv(nu, x), rel=1e-10)
        assert jp == pytest.approx(sp.jvp(nu, x), rel=1e-10)
        assert y == pytest.approx(sp.yv(nu, x), rel=1e-10)
        assert yp == pytest.approx(sp.yvp(nu, x), rel=1e-10)


def test_wronskian_and_paths():
    assert glancing.wronskian_defect(100.0, 95.0) < 1e-10
    assert glancing.path_agreement(50.0, 1.2) < 1e-4
    with pytest.raises(ValueError):
        glancing.bessel_pair(1.0, 1.0, "nonsense")


def test_scaled_pair_reconstructs_j():
    nu, z = 300.0, 0.3
    s = glancing.bessel_scaled(nu, z)
    assert s["mj"] * math.exp(-s["L"]) == pytest.approx(sp.jv(nu, nu * z), rel=1e-8)


def test_green_structure():
    assert glancing.mode_order(2, 3) == 3.0
    assert glancing.mode_order(3, 1) == pytest.approx(1.5)
    assert abs(abs(glancing.bc_coefficient(2, 32.0, 15.5)) - 1.0) < 1e-12
    g1 = glancing.green_eval(2, 24.0, 3.0, 1.2, 1.7)
    g2 = glancing.green_eval(2, 24.0, 3.0, 1.7, 1.2)
    assert cmath.isclose(g1, g2, rel_tol=1e-12)
    assert glancing.green_hs_norm(2, 24.0, 15.5, 1) > 0.0
    assert glancing.aj_integral(64.0, 64.0, 0) > 0.0


def test_ols_and_j_alpha():
    f = glancing.ols([0.0, 1.0, 2.0, 3.0], [1.0, 3.0, 5.0, 7.0])
    assert f["slope"] == pytest.approx(2.0)
    assert f["intercept"] == pytest.approx(1.0)
    assert glancing.j_alpha(1024.0, 0.6) == 6  # 0.6 * log2(1024) = 6 exactly


def test_sweep_grid_small():
    recs = glancing.sweep_grid(2, [32.0], alpha=0.6)
    assert [r["j"] for r in recs] == list(range(glancing.j_alpha(32.0, 0.6) + 1))
    for r in recs:
        assert r["constant"] == pytest.approx(r["hs_norm"] * 32.0 * 2 ** (r["j"] / 2))


def test_wavepacket_checks():
    iso, rec = glancing.transform_check(1, 32.0, seed=3)
    assert iso < 1e-3 and rec < 1e-3
    fc = glancing.flow_check(2, 64.0, c0=0.05, seed=2)
    assert fc["energy_drift"] < 1e-8
    assert fc["det_defect"] < 1e-6
    k = glancing.packet_kernel(32.0, 1.0, 0.0, (0.0, 0.0), 0.0, (0.0, 0.0))
    assert abs(k) > 0.0


def test_dyadic_calculus():
    b = glancing.exponent_book(3, 4.0, 4.0, 0.6)
    assert b["s"] == pytest.approx(0.25)
    assert b["class"] in {"subcritical", "critical", "inadmissible"}
    ok, margin, margins = glancing.theta_calculus_check(1024.0, 0.6)
    assert ok and margin >= 1.0 - 1e-12
    assert len(margins) == glancing.j_alpha(1024.0, 0.6) + 1


def test_run_suite_dyadic_in_memory():
    s = glancing.run_suite("", "dyadic", seed=4)
    assert s["subcommand"] == "dyadic" and s["seed"] == 4
    (mod,) = s["modules"]
    assert mod["module"] == "dyadic" and mod["pass"] and mod["rows"] > 0


def test_run_suite_rejects_bad_config():
    with pytest.raises(glancing.ConfigError):
        glancing.run_suite("[green]\nalpha = 0.7\n", "green")
    with pytest.raises(glancing.ConfigError):
        glancing.run_suite("", "dyadic", threads=0)
