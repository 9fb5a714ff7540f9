"""Limit profiles and convergence reports for ``p -> infinity`` and ``p -> 1``.

Large ``p``: ``u_p -> 1 - |t| = 2 G(t, 0)``, ``a(p) -> 1``,
``2 a**(p+1) / p -> 1``, the peak rescaling ``p (u_p(mu s) - a) / a``
tends to the Liouville profile ``W`` and ``alpha_1(p) mu_p**2 -> -1/2``.

``p`` near one: ``u_p / a -> cos(pi t / 2)``, ``p u_p**(p-1) -> pi**2/4``
locally, ``a**(p-1) = pi**2/4 (1 + c_tilde (p-1)) + o(p-1)`` and
``alpha_1(p) -> 0``.

Norms used below are discrete maxima over sample grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .core import check_exponent, shoot_first_zero, solve_unit, sup_norm_power
from .errors import ConvergenceError, DomainError
from .spectral import alpha1

NU1 = math.pi**2 / 4.0
BETA1 = -0.5
SQRT2_MASS = math.sqrt(2.0)
W_WINDOW = 5.0
REPORT_N = 4097


# ---------------------------------------------------------------------------
# closed-form profiles
# ---------------------------------------------------------------------------


def green(t, tau):
    """Dirichlet Green's function of ``-d^2/dt^2`` on ``(-1, 1)``."""
    t = np.asarray(t, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(np.abs(t) > 1) or np.any(np.abs(tau) > 1) or np.any(np.isnan(t + tau)):
        raise DomainError("arguments of the Green's function must lie in [-1, 1]")
    lo = np.minimum(t, tau)
    hi = np.maximum(t, tau)
    g = 0.5 * (1.0 + lo) * (1.0 - hi)
    return float(g) if g.ndim == 0 else g


def _log_cosh(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def limit_W(s):
    """``(W, W')`` with ``W(s) = log(4 e^(sqrt2 s) / (1 + e^(sqrt2 s))**2)``.

    Uses ``W = -2 log cosh(s / sqrt 2)``, which is finite for any real ``s``.
    """
    s = np.asarray(s, dtype=float)
    y = s / math.sqrt(2.0)
    W = -2.0 * _log_cosh(y)
    dW = -math.sqrt(2.0) * np.tanh(y)
    if W.ndim == 0:
        return float(W), float(dW)
    return W, dW


def limit_W_second(s):
    """Analytic ``W''(s) = -sech(s / sqrt 2)**2``."""
    y = np.abs(np.asarray(s, dtype=float)) / math.sqrt(2.0)
    e = np.exp(-2.0 * y)
    out = -4.0 * e / (1.0 + e) ** 2
    return float(out) if out.ndim == 0 else out


def W_mass() -> float:
    """``int_0^inf e^W ds`` by adaptive quadrature (equals ``sqrt 2``)."""
    val, err = quad(lambda s: math.exp(limit_W(s)[0]), 0.0, math.inf, epsabs=1e-12, epsrel=1e-12)
    return val


def phi1(t):
    """First Dirichlet eigenfunction ``cos(pi t / 2)`` and its derivative."""
    t = np.asarray(t, dtype=float)
    x = 0.5 * math.pi * t
    return np.cos(x), -0.5 * math.pi * np.sin(x)


def limit_H(lam, t):
    """``H_lambda(t) = cos(sqrt(pi**2/4 - lambda) t)`` for ``lambda < pi**2/4``."""
    lam = float(lam)
    if not lam < NU1:
        raise DomainError(f"limit_H needs lambda < pi^2/4 = {NU1:.6f}, got {lam}")
    w = math.sqrt(NU1 - lam)
    out = np.cos(w * np.asarray(t, dtype=float))
    return float(out) if out.ndim == 0 else out


def limit_H_second(lam, t):
    lam = float(lam)
    return (lam - NU1) * limit_H(lam, t)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def c_tilde() -> float:
    """``int phi1**2 |log phi1| / int phi1**2`` over ``(-1, 1)`` by quadrature."""
    num, e1 = quad(
        lambda t: -math.cos(0.5 * math.pi * t) ** 2 * math.log(math.cos(0.5 * math.pi * t)) if t < 1 else 0.0,
        0.0,
        1.0,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=200,
    )
    den, e2 = quad(lambda t: math.cos(0.5 * math.pi * t) ** 2, 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    if e1 > 1e-10 or e2 > 1e-10:
        raise ConvergenceError("quadrature for c_tilde did not reach 1e-10", estimate=max(e1, e2))
    value = num / den
    if not value > 0:
        raise ConvergenceError(f"c_tilde = {value} is not positive")
    return value


def c_tilde_closed_form() -> float:
    """``log 2 - 1/2`` (integration by parts of ``int cos^2 log cos``)."""
    return math.log(2.0) - 0.5


@dataclass(frozen=True)
class LimitConstants:
    c_tilde: float
    beta1: float = BETA1
    nu1: float = NU1
    sqrt2_mass: float = SQRT2_MASS


def limit_constants() -> LimitConstants:
    return LimitConstants(c_tilde=c_tilde())


# ---------------------------------------------------------------------------
# peak rescaling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RescaledProfile:
    """``u~(s) = p (u_p(mu s) - a) / a`` and its derivative on ``[-S, S]``."""

    p: float
    mu: float
    S: float
    s: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    def distance_to_W(self) -> float:
        W, _ = limit_W(self.s)
        return float(np.max(np.abs(self.values - W)))


def rescale_near_peak(sol, S: float = W_WINDOW, points: int = 2001) -> RescaledProfile:
    """Rescale ``sol`` around its maximum; requires ``S <= 1/mu_p``."""
    S = float(S)
    mu = sol.mu
    if not (S > 0 and S * mu <= 1.0):
        raise DomainError(f"S must lie in (0, 1/mu_p] = (0, {1.0 / mu:.6g}], got {S}")
    s = np.linspace(-S, S, int(points))
    u, du = sol.evaluate_even(np.clip(mu * s, -1.0, 1.0))
    a = sol.sup_norm
    p = sol.p
    vals = np.clip(p * (u - a) / a, -p, 0.0)
    mid = len(s) // 2
    vals[mid] = 0.0 if s[mid] == 0 else vals[mid]
    ders = p * mu * du / a
    for x in (s, vals, ders):
        x.setflags(write=False)
    return RescaledProfile(p=p, mu=mu, S=S, s=s, values=vals, derivs=ders)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def fit_rate(x_list, y_list):
    """Least-squares line through ``(log x, log y)``.

    Returns ``(slope, intercept, residual)`` where ``residual`` is the RMS of
    the fitted log residuals.
    """
    x = np.asarray(x_list, dtype=float)
    y = np.asarray(y_list, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise DomainError("fit_rate needs two equal-length sequences of length >= 2")
    if np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("fit_rate needs positive finite entries")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise DomainError("fit_rate needs at least two distinct x values")
    slope, intercept = np.polyfit(lx, ly, 1)
    res = ly - (slope * lx + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(res**2)))


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-``p`` metrics (aligned lists) and fitted log-log rates.

    ``rates[name] = (slope, intercept, residual)`` against ``p`` (large ``p``)
    or ``p - 1`` (near one); only metrics that are positive everywhere are fit.
    """

    regime: str
    p_values: tuple
    metrics: dict
    rates: dict = field(default_factory=dict)

    def metric(self, name) -> list:
        return list(self.metrics[name])

    def as_dict(self) -> dict:
        return {
            "regime": self.regime,
            "p_values": list(self.p_values),
            "metrics": {k: list(v) for k, v in self.metrics.items()},
            "rates": {k: {"slope": s, "intercept": i, "residual": r} for k, (s, i, r) in self.rates.items()},
        }


def _fit_all(x, metrics, names):
    rates = {}
    if len(x) < 2 or len(set(x)) < 2:
        return rates
    for name in names:
        ys = metrics[name]
        if all(math.isfinite(v) and v > 0 for v in ys):
            rates[name] = fit_rate(x, ys)
    return rates


def large_p_metrics(p, n: int = REPORT_N, S: float = W_WINDOW, with_alpha: bool = True) -> dict:
    sol = solve_unit(p, n)
    a = sol.sup_norm
    err_green = float(np.max(np.abs(sol.u - (1.0 - sol.t))))
    err_W = rescale_near_peak(sol, S).distance_to_W()
    ratio = math.exp(math.log(2.0) + (p + 1.0) * math.log(a) - math.log(p))
    out = {
        "err_green": err_green,
        "err_W": err_W,
        "ratio_pp1": ratio,
        "sup_norm_dev": abs(a - 1.0),
    }
    if with_alpha:
        out["alpha1_mu2"] = alpha1(p) * sol.mu**2
    return out


def report_large_p(p_list, *, n: int = REPORT_N, S: float = W_WINDOW, with_alpha: bool = True) -> ConvergenceReport:
    """Metrics of the ``p -> infinity`` limits for every ``p`` in ``p_list`` (all > 10)."""
    ps = tuple(check_exponent(p) for p in p_list)
    if not ps:
        raise DomainError("p_list is empty")
    if any(p <= 10 for p in ps):
        raise DomainError("report_large_p needs every p > 10")
    rows = [large_p_metrics(p, n, S, with_alpha) for p in ps]
    metrics = {k: [r[k] for r in rows] for k in rows[0]}
    fit = dict(metrics)
    fit["ratio_dev"] = [abs(r - 1.0) for r in metrics["ratio_pp1"]]
    if with_alpha:
        fit["alpha1_mu2_dev"] = [abs(v - BETA1) for v in metrics["alpha1_mu2"]]
    names = ["err_green", "err_W", "ratio_dev", "sup_norm_dev"] + (["alpha1_mu2_dev"] if with_alpha else [])
    return ConvergenceReport("LargeP", ps, metrics, _fit_all(ps, fit, names))


def near_one_metrics(p, n: int = REPORT_N, t_max: float = 0.9) -> dict:
    sol = solve_unit(p, n)
    ph, dph = phi1(sol.t)
    a = sol.sup_norm
    err0 = np.max(np.abs(sol.u / a - ph))
    err1 = np.max(np.abs(sol.du / a - dph))
    inner = sol.t <= t_max
    q = sol.potential()[inner]
    return {
        "err_phi1": float(max(err0, err1)),
        "err_q": float(np.max(np.abs(q - NU1))),
        "abs_alpha1": abs(alpha1(p)),
        "slope_est": (sol.sup_norm_power - NU1) / (p - 1.0),
    }


def report_near_one(p_list, *, n: int = REPORT_N, t_max: float = 0.9) -> ConvergenceReport:
    """Metrics of the ``p -> 1`` limits for every ``p`` in ``p_list`` (all in ``(1, 1.5)``)."""
    ps = tuple(check_exponent(p) for p in p_list)
    if not ps:
        raise DomainError("p_list is empty")
    if any(not 1.0 < p < 1.5 for p in ps):
        raise DomainError("report_near_one needs every p in (1, 1.5)")
    rows = [near_one_metrics(p, n, t_max) for p in ps]
    metrics = {k: [r[k] for r in rows] for k in rows[0]}
    rates = _fit_all([p - 1.0 for p in ps], metrics, ["err_phi1", "err_q", "abs_alpha1"])
    return ConvergenceReport("NearOne", ps, metrics, rates)


def slope_at(p, method: str = "quadrature") -> float:
    """Finite-difference slope ``(a(p)**(p-1) - pi**2/4) / (p - 1)``.

    ``a**(p-1)`` comes from the first-integral quadrature or, with
    ``method="ivp"``, from the squared first zero of the scale-free problem;
    neither needs ``a`` itself, which overflows for ``p`` very close to one.
    """
    p = check_exponent(p)
    if method == "quadrature":
        k = sup_norm_power(p)
    elif method == "ivp":
        k = float(shoot_first_zero(p).t_events[0][0]) ** 2
    else:
        raise DomainError(f"unknown method {method!r}")
    return (k - NU1) / (p - 1.0)


def h_limit_error(p, lam, t_max: float = 0.9) -> float:
    """``sup_{t <= t_max} |h(t)/h(0) - H_lambda(t)|`` over the h-profile nodes."""
    from .stability import solve_h

    prof = solve_h(p, lam)
    inner = prof.t <= t_max
    return float(np.max(np.abs(prof.h[inner] / prof.h[0] - limit_H(lam, prof.t[inner]))))
