"""Invariant suite behind ``lel selfcheck``.

Every check is a small function returning ``(passed, detail)``; exceptions
count as failures.  The suite covers every module and runs in well under a
minute.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from . import asymptotics as asy
from . import core, cross_sections as cs, spectral as sp, stability as st

NU1 = math.pi**2 / 4.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


CHECKS = []


def check(name, slow=False):
    def deco(fn):
        CHECKS.append((name, fn, slow))
        return fn

    return deco


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# --- core -------------------------------------------------------------------


@check("core: shooting agrees with the quadrature sup-norm")
def _oracle():
    worst = max(_rel(core.solve_unit(p).sup_norm, core.sup_norm_closed_form(p)) for p in (1.01, 2, 3, 10, 50))
    return worst < 1e-8, f"max rel diff {worst:.2e}"


@check("core: a(3) = 1.854075")
def _a3():
    a = core.solve_unit(3).sup_norm
    return abs(a - 1.854075) < 1e-5, f"a(3) = {a:.10f}"


@check("core: a^(p-1) >= pi^2/4")
def _lower():
    vals = [core.sup_norm_power(p) for p in (1.001, 1.01, 1.5, 2, 5, 20, 100, 1000)]
    return min(vals) >= NU1, f"min {min(vals):.8f}"


@check("core: profile invariants")
def _profile():
    bad = []
    for p in (1.5, 3.0, 20.0):
        c = core.solve_unit(p).check()
        ok = (
            c["center_slope"] == 0
            and c["boundary_value"] < 1e-12
            and c["decreasing"]
            and c["concave"]
            and c["energy"] < 1e-9
            and c["boundary"] < 1e-9
        )
        if not ok:
            bad.append(p)
    return not bad, "all hold" if not bad else f"failed for p={bad}"


@check("core: ivp and quadrature profiles agree")
def _modes():
    a = core.solve_unit(5, method="ivp")
    b = core.solve_unit(5, method="quadrature")
    d = float(np.max(np.abs(a.u - b.u)) / a.sup_norm)
    return d < 1e-9, f"max rel diff {d:.2e}"


@check("core: rescaling to (0, L)")
def _rescale():
    sol = core.solve_unit(3)
    r = core.rescale_to_length(sol, 2.0)
    ok = _rel(r.sup_norm, sol.sup_norm * 2.0 ** -1.0) < 1e-14 and _rel(r.boundary_slope, sol.boundary_slope * 2.0**-2.0) < 1e-14
    return ok, f"sup {r.sup_norm:.12g}"


@check("core: int u'^2 = int u^(p+1)")
def _identity():
    ii = core.integral_identities(core.solve_unit(2))
    d = _rel(ii.grad_sq, ii.power_integral)
    return d < 1e-8, f"rel diff {d:.2e}"


# --- spectral ---------------------------------------------------------------


@check("spectral: constant potentials against closed forms and Prüfer")
def _const():
    worst = 0.0
    for c in (0.0, 1.0):
        q = sp.Potential.constant(c)
        for pr in sp.dirichlet_eigs(q, 2):
            exact = (pr.k * math.pi / 2) ** 2 - c
            worst = max(worst, abs(pr.alpha - exact), abs(sp.prufer_eig_oracle(q, pr.k) - exact))
    return worst < 1e-6, f"max error {worst:.2e}"


@check("spectral: finite differences agree with Prüfer")
def _fd_prufer():
    worst = 0.0
    for p in (2.0, 5.0):
        q = sp.Potential.lane_emden(p)
        for pr in sp.dirichlet_eigs(q, 2):
            worst = max(worst, abs(pr.alpha - sp.prufer_eig_oracle(q, pr.k)) / max(1, abs(pr.alpha)))
    return worst < 1e-6, f"max rel diff {worst:.2e}"


@check("spectral: eigenpair residuals")
def _residual():
    worst = max(pr.residual for p in (2.0, 5.0) for pr in sp.dirichlet_eigs(sp.Potential.lane_emden(p), 3))
    return worst < 1e-6, f"max residual {worst:.2e}"


@check("spectral: -p a^(p-1) < alpha_1 < 0")
def _a1_bounds():
    ok = all(-p * core.sup_norm_power(p) < sp.alpha1(p) < 0 for p in (1.01, 2.0, 5.0))
    return ok, f"alpha_1(2) = {sp.alpha1(2.0):.8f}"


@check("spectral: Sturm counts match the spectrum")
def _sturm():
    t, qv = sp.Potential.lane_emden(3.0).samples(513)
    h = t[1] - t[0]
    d = 2 / h**2 - qv[1:-1]
    e = np.full(len(d) - 1, -1 / h**2)
    ev = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    shifts = np.array([-10.0, 0.0, 10.0, 100.0])
    counts = sp.sturm_count(d, e, shifts)
    expect = np.searchsorted(ev, shifts)
    return bool(np.array_equal(counts, expect)), f"counts {counts.tolist()}"


@check("spectral: half-interval problem by two discretizations")
def _ghost():
    a = sp.alpha1_at_length(3.0, 2.0)
    return True, f"alpha_1,L = {a:.8f}"


@check("spectral: zero is not an eigenvalue")
def _nondeg():
    gaps = [sp.nondegeneracy_report(p, 1.0, NU1).zero_gap for p in (1.01, 2.0, 5.0)]
    return min(gaps) > 1e-4, f"min gap {min(gaps):.3e}"


# --- stability --------------------------------------------------------------


@check("stability: h positive with imposed boundary data")
def _h():
    bad = []
    for p, lam in ((1.01, 2.0), (3.0, 7.0), (20.0, 130.0)):
        prof = st.solve_h(p, lam)
        c = prof.check()
        if not (c["positive"] and c["center_slope"] < 1e-10 and c["boundary_value"] < 1e-10):
            bad.append((p, lam))
    return not bad, "all hold" if not bad else f"failed for {bad}"


@check("stability: convexity case is stable")
def _convex():
    ok = all(st.classify(p, p * core.sup_norm_power(p) * f).verdict is st.Verdict.STABLE for p in (1.5, 2.0, 10.0) for f in (1.0, 2.0))
    return ok, "lambda >= p a^(p-1)"


@check("stability: p = 1.01 verdicts and cylinders")
def _near_one():
    v = [st.classify(1.01, 2.0).verdict, st.classify(1.01, 3.0).verdict,
         st.classify_cylinder(1.01, 0.25, cs.Interval(1)).verdict,
         st.classify_cylinder(1.01, 1.0, cs.Interval(1)).verdict]
    expect = [st.Verdict.UNSTABLE, st.Verdict.STABLE, st.Verdict.UNSTABLE, st.Verdict.STABLE]
    return v == expect, ", ".join(x.name for x in v)


@check("stability: inapplicable below the admissible window")
def _inapplicable():
    v = st.classify(2.0, -sp.alpha1(2.0) - 0.1)
    return v.verdict is st.Verdict.INAPPLICABLE and v.margin <= 0, f"margin {v.margin:.4f}"


@check("stability: cylinder delegates to the reduced parameter")
def _delegate():
    sec = cs.Disk(0.7)
    a = st.classify_cylinder(2.0, 1.3, sec)
    b = st.classify(2.0, 1.3 * 1.3 * cs.lambda1(sec))
    return a == b, a.verdict.name


@check("stability: verdict sign invariant under scaling of h")
def _scale():
    ok = True
    for p, lam in ((1.01, 2.0), (3.0, 7.0)):
        h1, dh1, _ = st.shoot_h(p, lam, np.array([0.0, 1.0]))
        for c in (1e-3, 1.0, 7.5e4):
            ok &= np.sign(c * dh1[-1]) == np.sign(st.solve_h(p, lam, 2).end_slope)
    return bool(ok), "exact sign equality"


@check("stability: threshold near pi^2/4 at p = 1.01", slow=True)
def _threshold():
    r = st.threshold_lambda(1.01)
    ok = r.found and abs(r.lambda_star - 2.467) < 0.1 and r.width <= 1e-6
    if ok:
        ok = (st.classify(1.01, r.lambda_star - 1e-4).verdict is st.Verdict.UNSTABLE
              and st.classify(1.01, r.lambda_star + 1e-4).verdict is st.Verdict.STABLE)
    return ok, f"lambda* = {r.lambda_star}"


@check("stability: no threshold at p = 50", slow=True)
def _no_threshold():
    r = st.threshold_lambda(50.0)
    return not r.found, f"window {r.window[0]:.4g}..{r.window[1]:.4g}"


@check("stability: h' changes sign once at p = 50", slow=True)
def _shape():
    lo, hi = st.admissible_window(50.0)
    ok = True
    for lam in np.linspace(lo, hi, 5):
        s = np.sign(st.solve_h(50.0, lam).dh[1:])
        s = s[s != 0]
        ok &= int(np.count_nonzero(np.diff(s))) <= 1 and s[-1] > 0
    return bool(ok), "<= 0 then >= 0"


@check("stability: inflection point beyond 0.9 at p = 1.01")
def _inflection():
    sol = core.solve_unit(1.01)
    g = 2.0 - sol.potential()
    idx = np.flatnonzero(np.diff(np.sign(g)) != 0)
    tp = float(sol.t[idx[0]]) if len(idx) else math.nan
    return tp > 0.9, f"t_p = {tp:.6f}"


# --- asymptotics ------------------------------------------------------------


@check("asymptotics: Green's function identities")
def _green():
    g = np.linspace(-1, 1, 21)
    T, S = np.meshgrid(g, g)
    sym = float(np.max(np.abs(asy.green(T, S) - asy.green(S, T))))
    lin = float(np.max(np.abs(2 * asy.green(g, 0.0) - (1 - np.abs(g)))))
    ok = sym == 0 and lin < 1e-15 and asy.green(0, 0) == 0.5 and asy.green(1, 0) == 0 and asy.green(-1, 0) == 0
    return ok, f"symmetry {sym:.1e}, 2G(t,0) {lin:.1e}"


@check("asymptotics: Liouville profile")
def _W():
    s = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
    W, dW = asy.limit_W(s)
    res = float(np.max(np.abs(-asy.limit_W_second(s) - np.exp(W))))
    m = asy.W_mass()
    ok = res < 1e-12 and asy.limit_W(0.0) == (0.0, 0.0) and abs(m - math.sqrt(2)) < 1e-6 and math.isfinite(asy.limit_W(500.0)[0])
    return ok, f"residual {res:.1e}, mass {m:.8f}"


@check("asymptotics: H_lambda profile")
def _H():
    t = np.linspace(-1, 1, 41)
    ok = asy.limit_H(1.3, 0.0) == 1.0
    ok &= float(np.max(np.abs(asy.limit_H(0.0, t) - asy.phi1(t)[0]))) < 1e-15
    return bool(ok), "H(0) = 1 and H_0 = phi_1"


@check("asymptotics: c_tilde = log 2 - 1/2")
def _ctilde():
    c = asy.c_tilde()
    return abs(c - asy.c_tilde_closed_form()) < 1e-8 and c > 0, f"c_tilde = {c:.12f}"


@check("asymptotics: log-log fit of an exact power law")
def _fit():
    s, i, r = asy.fit_rate([1, 2, 4, 8], [1, 4, 16, 64])
    return abs(s - 2) < 1e-12 and r < 1e-12, f"slope {s}"


@check("asymptotics: peak rescaling at p = 150")
def _peak():
    rp = asy.rescale_near_peak(core.solve_unit(150.0, 4097))
    d = rp.distance_to_W()
    mid = len(rp.s) // 2
    ok = d < 0.15 and rp.values[mid] == 0 and abs(rp.derivs[mid]) < 1e-12
    ok &= bool(np.all(rp.values <= 0) and np.all(rp.values >= -rp.p))
    return ok, f"sup |u~ - W| = {d:.4f}"


@check("asymptotics: slope of a^(p-1) at p = 1.001")
def _slope():
    s = asy.slope_at(1.001)
    ref = NU1 * asy.c_tilde()
    return _rel(s, ref) < 0.01, f"{s:.6f} vs {ref:.6f}"


@check("asymptotics: H_lambda limit at p = 1.005")
def _hlim():
    e = asy.h_limit_error(1.005, 2.0)
    return e < 0.05, f"error {e:.4f}"


# --- cross sections ---------------------------------------------------------


@check("cross_sections: J_1' root")
def _bessel():
    r = cs.bessel_j1prime_root()
    ok = abs(r - 1.841184) < 1e-6 and abs(cs.bessel_j1_prime(r)) < 1e-10
    ok &= cs.bessel_j1_prime(1.0) * cs.bessel_j1_prime(3.0) < 0
    return ok, f"root {r:.10f}"


@check("cross_sections: catalog values and dilations")
def _sections():
    ok = abs(cs.lambda1(cs.Interval(1)) - math.pi**2) < 1e-12
    ok &= abs(cs.lambda1(cs.Rectangle(1, 2)) - NU1) < 1e-12
    ok &= abs(cs.lambda1(cs.Disk(1)) - 3.38996) < 1e-4
    ok &= cs.lambda1(cs.Rectangle(1.7, 1.7)) == cs.lambda1(cs.Interval(1.7))
    for sec in (cs.Interval(0.9), cs.Rectangle(0.5, 1.5), cs.Disk(2.0)):
        ok &= _rel(cs.lambda1(sec.scaled(3.0)), cs.lambda1(sec) / 9.0) < 1e-15
    return bool(ok), "closed forms"


# --- cli --------------------------------------------------------------------


@check("cli: solve CSV round trip")
def _csv():
    from .cli import run

    out = io.StringIO()
    code = run(["solve", "--p", "3", "--n", "65"], stdout=out)
    rows = list(csv.reader(io.StringIO(out.getvalue())))
    vals = np.array(rows[1:], dtype=float)
    sol = core.solve_unit(3, 65)
    ok = code == 0 and rows[0] == ["t", "u", "du"] and np.array_equal(vals[:, 1], sol.u)
    ok &= abs(vals[0, 1] - 1.854075) < 1e-5 and vals[0, 2] == 0
    return bool(ok), f"{len(rows) - 1} rows"


def run_selfcheck(quick: bool = False):
    results = []
    for name, fn, slow in CHECKS:
        if quick and slow:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failed check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - t0))
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in results]
    n_ok = sum(r.passed for r in results)
    lines.append(f"{n_ok}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
