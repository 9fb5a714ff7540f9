import math

import numpy as np
import pytest

from lane_emden_lab import core, spectral as sp
from lane_emden_lab.errors import ConvergenceError, DomainError, MethodDisagreement

NU1 = math.pi**2 / 4


def test_lane_emden_potential_shape():
    for p in (1.5, 3.0, 20.0):
        q = sp.Potential.lane_emden(p)
        t, v = q.samples(1025)
        assert np.array_equal(v, v[::-1])
        assert v[0] == 0 and v[-1] == 0
        assert np.argmax(v) == 512
        assert v[512] == pytest.approx(p * core.solve_unit(p).sup_norm_power, rel=1e-14)


def test_zero_potential():
    pairs = sp.dirichlet_eigs(sp.Potential.constant(0.0), 3)
    for pr in pairs:
        assert pr.alpha == pytest.approx((pr.k * math.pi / 2) ** 2, abs=1e-5)
    assert [round(pr.alpha, 4) for pr in pairs] == [2.4674, 9.8696, 22.2066]


@pytest.mark.parametrize("c", [-1.0, 0.0, 2.0])
def test_constant_shift_covariance(c):
    base = sp.dirichlet_eigs(sp.Potential.lane_emden(3.0), 3)
    shifted = sp.dirichlet_eigs(sp.Potential.lane_emden(3.0).shifted(c), 3)
    for a, b in zip(base, shifted):
        assert b.alpha == pytest.approx(a.alpha - c, abs=1e-8)


def test_p2_first_eigenvalue_bracket():
    a1 = sp.dirichlet_eigs(sp.Potential.lane_emden(2.0), 1)[0].alpha
    assert -5.90 < a1 < 0


@pytest.mark.parametrize("p", [1.01, 2.0, 5.0, 20.0])
def test_eigenpair_invariants(p):
    pairs = sp.dirichlet_eigs(sp.Potential.lane_emden(p), 4)
    alphas = [pr.alpha for pr in pairs]
    assert all(x < y for x, y in zip(alphas, alphas[1:]))
    for pr in pairs:
        assert pr.residual < 1e-6
        assert np.max(np.abs(pr.w)) == pytest.approx(1.0, abs=1e-15)
    w1 = pairs[0].w
    assert np.all(w1[1:-1] > 0)
    # k-th eigenfunction has k - 1 interior sign changes
    for pr in pairs:
        inner = pr.w[1:-1]
        inner = inner[np.abs(inner) > 1e-9]
        assert np.count_nonzero(np.diff(np.sign(inner))) == pr.k - 1


def test_richardson_improves_on_the_fine_grid():
    pr = sp.dirichlet_eigs(sp.Potential.constant(0.0), 1)[0]
    assert abs(pr.alpha - NU1) < abs(pr.alpha_fine - NU1) < abs(pr.alpha_coarse - NU1)


def test_domain_checks():
    q = sp.Potential.constant(0.0)
    with pytest.raises(DomainError):
        sp.dirichlet_eigs(q, 1, n=128)
    with pytest.raises(DomainError):
        sp.dirichlet_eigs(q, 1, n=1024)
    with pytest.raises(DomainError):
        sp.dirichlet_eigs(q, 0)
    with pytest.raises(DomainError):
        sp.dirichlet_eigs(q, 100, n=257)
    with pytest.raises(DomainError):
        sp.prufer_eig_oracle(q, 0)


def test_sturm_count_against_dense_spectrum():
    rng = np.random.default_rng(7)
    d = rng.normal(size=40)
    e = rng.normal(size=39)
    ev = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    x = np.linspace(ev[0] - 1, ev[-1] + 1, 57)
    assert np.array_equal(sp.sturm_count(d, e, x), np.searchsorted(ev, x))


def test_prufer_examples():
    assert sp.prufer_eig_oracle(sp.Potential.constant(0.0), 1) == pytest.approx(NU1, abs=1e-8)
    assert sp.prufer_eig_oracle(sp.Potential.constant(1.0), 2) == pytest.approx(math.pi**2 - 1, abs=1e-6)
    assert sp.prufer_eig_oracle(sp.Potential.constant(0.0), 3) == pytest.approx(9 * NU1, abs=1e-7)


def test_prufer_on_a_generic_even_potential():
    q = sp.Potential(func=lambda t: 3.0 * np.cos(np.pi * np.asarray(t)) ** 2, name="cos2")
    for pr in sp.dirichlet_eigs(q, 3):
        assert sp.prufer_eig_oracle(q, pr.k) == pytest.approx(pr.alpha, abs=1e-6)


@pytest.mark.parametrize("p", [2.0, 5.0, 50.0])
def test_methods_agree_on_lane_emden(p):
    q = sp.Potential.lane_emden(p)
    for pr in sp.dirichlet_eigs(q, 3):
        assert abs(sp.prufer_eig_oracle(q, pr.k) - pr.alpha) <= 1e-6 * max(1, abs(pr.alpha))


def test_check_agreement():
    sp.check_agreement(100.0, 100.00001, 1e-6)
    with pytest.raises(MethodDisagreement) as exc:
        sp.check_agreement(1.0, 1.001, 1e-6)
    assert isinstance(exc.value, ConvergenceError)
    assert exc.value.estimate == pytest.approx(1e-3)


@pytest.mark.parametrize("p", [1.01, 2.0, 5.0, 50.0])
def test_alpha1_lower_bound(p):
    assert sp.alpha1(p) > -p * core.solve_unit(p).sup_norm_power


def test_alpha1_examples():
    assert sp.alpha1(50.0) < 0
    assert abs(sp.alpha1(1.01)) < 0.1
    for p in (1.01, 1.05, 1.1):
        assert sp.alpha1(p) <= NU1


@pytest.mark.parametrize("p", [20.0, 50.0, 100.0])
def test_alpha1_mu2_band(p):
    v = sp.alpha1(p) * core.solve_unit(p).mu ** 2
    assert -1 < v < 0


def test_alpha1_at_length():
    assert sp.alpha1_at_length(3.0, 1.0) == sp.alpha1(3.0)
    assert sp.alpha1_at_length(3.0, 2.0) == pytest.approx(sp.alpha1(3.0) / 4, abs=1e-9)
    direct = sp.mixed_eigs_ghost(3.0, 2.0, 1)[0]
    assert direct == pytest.approx(sp.alpha1(3.0) / 4, rel=1e-5)
    with pytest.raises(DomainError):
        sp.alpha1_at_length(3.0, -1.0)


def test_mixed_eigs_two_discretizations():
    a = sp.mixed_eigs(2.0, 1.5, 3)
    b = sp.mixed_eigs_ghost(2.0, 1.5, 3)
    assert np.allclose(a, b, rtol=1e-5)


def test_nondegeneracy_examples():
    r = sp.nondegeneracy_report(1.01, 1.0, math.pi**2)
    assert r.margin > 0 and r.nondegenerate
    r2 = sp.nondegeneracy_report(2.0, 1.0, 1.0)
    r3 = sp.nondegeneracy_report(2.0, 1.0, 4.0)
    assert r3.margin - r2.margin == pytest.approx(3.0, abs=1e-14)
    assert r2.zero_gap > 0
    assert math.isfinite(r2.margin) and math.isfinite(r2.zero_gap)
    with pytest.raises(DomainError):
        sp.nondegeneracy_report(2.0, 1.0, 0.0)
