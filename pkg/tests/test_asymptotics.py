import math

import numpy as np
import pytest
from scipy.integrate import quad

from lane_emden_lab import asymptotics as asy, core
from lane_emden_lab.errors import DomainError

NU1 = math.pi**2 / 4


def test_green_examples():
    assert asy.green(0, 0) == 0.5
    assert asy.green(1, 0) == 0 and asy.green(-1, 0) == 0
    g = np.linspace(-1, 1, 21)
    T, S = np.meshgrid(g, g)
    assert np.array_equal(asy.green(T, S), asy.green(S, T))
    assert np.max(np.abs(2 * asy.green(g, 0.0) - (1 - np.abs(g)))) < 1e-15
    with pytest.raises(DomainError):
        asy.green(1.5, 0)


def test_green_continuity_and_kink():
    tau = 0.3
    eps = 1e-7
    left = asy.green(tau - eps, tau)
    right = asy.green(tau + eps, tau)
    assert abs(left - right) < 1e-6
    slope_jump = (asy.green(tau + 2 * eps, tau) - right) / eps - (left - asy.green(tau - 2 * eps, tau)) / eps
    assert slope_jump == pytest.approx(-1.0, abs=1e-6)


def test_W_examples():
    assert asy.limit_W(0.0) == (0.0, 0.0)
    s = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
    W, _ = asy.limit_W(s)
    assert np.max(np.abs(-asy.limit_W_second(s) - np.exp(W))) < 1e-12
    assert asy.W_mass() == pytest.approx(1.414214, abs=1e-6)


def test_W_matches_the_log_form_and_is_stable():
    s = np.linspace(-10, 10, 101)
    x = math.sqrt(2) * s
    ref = np.log(4 * np.exp(x) / (1 + np.exp(x)) ** 2)
    W, dW = asy.limit_W(s)
    assert np.allclose(W, ref, atol=1e-12)
    assert np.allclose(dW, np.gradient(W, s), atol=2e-2)
    big, dbig = asy.limit_W(np.array([-500.0, 500.0]))
    assert np.all(np.isfinite(big))
    assert big[0] == pytest.approx(-500 * math.sqrt(2) + math.log(4), rel=1e-14)
    assert dbig[1] == pytest.approx(-math.sqrt(2))


def test_H_examples():
    assert asy.limit_H(1.0, 0.0) == 1.0
    t = np.linspace(-1, 1, 41)
    assert np.max(np.abs(asy.limit_H(0.0, t) - np.cos(np.pi * t / 2))) < 1e-15
    for lam in (-3.0, 0.5, 2.0):
        w = math.sqrt(NU1 - lam)
        h2 = -w * w * np.cos(w * t)
        assert np.max(np.abs(h2 - (lam - NU1) * asy.limit_H(lam, t))) < 1e-12
    with pytest.raises(DomainError):
        asy.limit_H(NU1, 0.0)


def test_c_tilde():
    den, _ = quad(lambda t: math.cos(math.pi * t / 2) ** 2, -1, 1)
    assert den == pytest.approx(1.0, abs=1e-14)
    c = asy.c_tilde()
    assert c > 0
    assert c == pytest.approx(0.193147, abs=1e-6)
    assert abs(c - (math.log(2) - 0.5)) < 1e-8
    lc = asy.limit_constants()
    assert lc.beta1 == -0.5 and lc.nu1 == NU1 and lc.sqrt2_mass == math.sqrt(2)


def test_fit_rate_examples():
    x = np.array([1.0, 2.0, 5.0, 10.0])
    s, i, r = asy.fit_rate(x, x**2)
    assert s == pytest.approx(2, abs=1e-12) and r < 1e-12
    s, _, _ = asy.fit_rate(x, np.full(4, 3.0))
    assert s == pytest.approx(0, abs=1e-12)
    noise = 1 + 1e-6 * np.random.default_rng(0).standard_normal(4)
    s, i, _ = asy.fit_rate(x, 3 * x**1.5 * noise)
    assert s == pytest.approx(1.5, abs=1e-3) and math.exp(i) == pytest.approx(3, rel=1e-4)
    for bad in (([1.0], [1.0]), ([1, 2], [1, -1]), ([2, 2], [1, 3]), ([1, 2, 3], [1, 2])):
        with pytest.raises(DomainError):
            asy.fit_rate(*bad)


def test_rescaled_profile():
    sol = core.solve_unit(150.0, 4097)
    rp = asy.rescale_near_peak(sol, 5.0)
    mid = len(rp.s) // 2
    assert rp.s[mid] == 0 and rp.values[mid] == 0 and rp.derivs[mid] == 0
    assert np.all(rp.values <= 0) and np.all(rp.values >= -rp.p)
    assert rp.distance_to_W() < 0.15
    with pytest.raises(DomainError):
        asy.rescale_near_peak(core.solve_unit(2.0), 100.0)


def test_rescaled_profile_bounds_over_whole_range():
    sol = core.solve_unit(5.0)
    rp = asy.rescale_near_peak(sol, 1.0 / sol.mu)
    assert rp.values.min() == pytest.approx(-5.0, abs=1e-12)
    assert rp.values.max() == 0


def test_report_large_p():
    rep = asy.report_large_p([20, 50, 100])
    assert rep.regime == "LargeP"
    g = rep.metric("err_green")
    assert g[0] > g[1] > g[2]
    for name, vals in rep.metrics.items():
        assert len(vals) == 3 and all(math.isfinite(v) for v in vals)
    assert set(rep.rates) >= {"err_green", "err_W", "ratio_dev"}
    with pytest.raises(DomainError):
        asy.report_large_p([5.0])


def test_ratio_in_closed_form_mode():
    rep = asy.report_large_p([100, 300, 1000], with_alpha=False)
    r = rep.metric("ratio_pp1")
    assert r[0] > r[1] > r[2] > 1
    assert abs(r[2] - 1) < 0.02
    assert core.solve_unit(1000).method == "quadrature"


def test_report_near_one():
    rep = asy.report_near_one([1.1, 1.05, 1.01])
    a = rep.metric("abs_alpha1")
    assert a[0] > a[1] > a[2]
    assert rep.metric("err_phi1")[2] < 1e-2
    with pytest.raises(DomainError):
        asy.report_near_one([2.0])


def test_slope_near_one():
    ref = NU1 * asy.c_tilde()
    assert ref == pytest.approx(0.47657, abs=1e-5)
    for method in ("quadrature", "ivp"):
        assert asy.slope_at(1.001, method) == pytest.approx(ref, rel=0.01)


def test_h_limit():
    assert asy.h_limit_error(1.005, 2.0) < 0.05
