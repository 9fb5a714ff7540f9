"""Positive solution of the one-dimensional Lane-Emden problem.

The problem is ``-u'' = u**p`` on ``(-1, 1)`` with ``u(+-1) = 0``.  The
solution is even, so everything here is sampled on ``[0, 1]`` and the even
extension is produced on demand.

Two independent constructions are available:

* ``"ivp"``: shoot the scale-free problem ``v'' = -v**p``, ``v(0) = 1``,
  ``v'(0) = 0`` with an embedded Runge-Kutta pair up to its first zero ``T``.
  Scaling gives ``u(t) = T**(2/(p-1)) v(T t)``.
* ``"quadrature"``: invert the first integral
  ``u'**2/2 + u**(p+1)/(p+1) = a**(p+1)/(p+1)`` node by node.

The sup-norm ``a = u(0)`` also has a quadrature formula,

    a(p)**(p-1) = (p+1)/2 * J(p)**2,    J(p) = int_0^1 (1 - s**(p+1))**(-1/2) ds,

evaluated with the substitution ``s = 1 - v**2`` followed by a composite
Gauss-Legendre rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline

from .errors import ConvergenceError, DomainError

IVP_RTOL = 1e-12
IVP_ATOL = 1e-14
QUAD_TOL = 1e-14
IVP_MAX_P = 300.0
DEFAULT_N = 1025
MIN_N = 33

# log(max double) with head-room for a**(p+1)
_LOG_MAX = 700.0


def check_exponent(p) -> float:
    """Return ``p`` as a float, raising :class:`DomainError` unless ``1 < p < inf``."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"exponent must be a real number, got {p!r}") from None
    if not math.isfinite(p) or p <= 1.0:
        raise DomainError(f"exponent must satisfy 1 < p < inf, got p={p!r}")
    return p


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss(f, a: float, b: float, panels: int, order: int = 16) -> float:
    """Integrate the vectorized ``f`` over ``[a, b]`` with ``panels`` equal Gauss panels."""
    x, w = _gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = mid[:, None] + half[:, None] * x[None, :]
    return float(np.sum(half[:, None] * w[None, :] * f(nodes)))


def _one_minus_power(v2, q):
    # 1 - (1 - v2)**q without cancellation for small v2
    with np.errstate(divide="ignore"):
        return -np.expm1(q * np.log1p(-v2))


def _time_integrand(v, q):
    # (1 - s**q)**(-1/2) ds after s = 1 - v**2; finite (-> 2/sqrt(q)) at v = 0
    v = np.asarray(v, dtype=float)
    safe = np.where(v > 0, v, 1.0)
    out = 2.0 * safe / np.sqrt(_one_minus_power(safe * safe, q))
    return np.where(v > 0, out, 2.0 / math.sqrt(q))


@lru_cache(maxsize=256)
def first_integral_constant(p: float, tol: float = QUAD_TOL) -> tuple[float, float]:
    """Return ``(J, err)`` with ``J = int_0^1 (1 - s**(p+1))**(-1/2) ds``.

    The panel count is doubled until two successive composite rules agree to
    ``tol`` (relative); ``err`` is that last difference.
    """
    p = check_exponent(p)
    q = p + 1.0
    f = lambda v: _time_integrand(v, q)  # noqa: E731
    panels = 8
    prev = composite_gauss(f, 0.0, 1.0, panels)
    while panels < 8192:
        panels *= 2
        cur = composite_gauss(f, 0.0, 1.0, panels)
        err = abs(cur - prev)
        if err <= tol * abs(cur):
            return cur, err
        prev = cur
    raise ConvergenceError(
        f"quadrature for J(p={p}) did not converge; error estimate {err:.3e}", estimate=err
    )


def sup_norm_power(p) -> float:
    """Return ``a(p)**(p-1)`` from the quadrature formula.

    This stays representable even when ``a(p)`` itself overflows, which happens
    for ``p - 1`` below about ``1.3e-3``.
    """
    p = check_exponent(p)
    J, _ = first_integral_constant(p)
    return 0.5 * (p + 1.0) * J * J


def log_sup_norm(p) -> float:
    """Natural logarithm of ``a(p)``."""
    p = check_exponent(p)
    return math.log(sup_norm_power(p)) / (p - 1.0)


def sup_norm_closed_form(p) -> float:
    """Sup-norm ``a(p) = u_p(0)`` of the positive solution, by quadrature.

    Raises :class:`DomainError` when ``a(p)`` overflows a double; use
    :func:`sup_norm_power` or :func:`log_sup_norm` in that regime.
    """
    la = log_sup_norm(p)
    if la > _LOG_MAX:
        raise DomainError(
            f"a(p) = exp({la:.1f}) overflows; use sup_norm_power(p) = a**(p-1) instead"
        )
    return math.exp(la)


# ---------------------------------------------------------------------------
# solution objects
# ---------------------------------------------------------------------------


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LaneEmdenSolution:
    """Samples of ``u_p`` and ``u_p'`` on a uniform grid of ``[0, 1]``.

    ``sup_norm_power`` stores ``a**(p-1)`` as computed by the solver; near
    ``p = 1`` it is much better conditioned than ``a`` itself.
    """

    p: float
    t: np.ndarray
    u: np.ndarray
    du: np.ndarray
    sup_norm: float
    sup_norm_power: float
    method: str = "ivp"
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def boundary_slope(self) -> float:
        return float(self.du[-1])

    @property
    def mu(self) -> float:
        """Peak rescaling length ``(p a**(p-1))**(-1/2)``."""
        return (self.p * self.sup_norm_power) ** -0.5

    @cached_property
    def _spline(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.t, self.u, self.du)

    def evaluate(self, t):
        return evaluate(self, t)

    def evaluate_even(self, t):
        """``(u, u')`` of the even extension at ``t`` in ``[-1, 1]``."""
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0):
            raise DomainError("t must lie in [-1, 1]")
        u, du = evaluate(self, np.abs(t))
        return u, np.where(t < 0, -du, du)

    def normalized(self, t=None):
        """``u/a`` at the grid nodes (or at ``t`` in ``[-1, 1]``), clamped at zero."""
        if t is None:
            return np.maximum(self.u / self.sup_norm, 0.0)
        u, _ = self.evaluate_even(t)
        return np.maximum(u / self.sup_norm, 0.0)

    def potential(self, t=None):
        """Samples of ``p u**(p-1)`` on the grid, or at ``t`` in ``[-1, 1]``."""
        ub = self.normalized(t)
        with np.errstate(divide="ignore"):
            return self.p * self.sup_norm_power * np.exp((self.p - 1.0) * np.log(ub))

    def energy_residual(self) -> float:
        """Max over nodes of the first-integral defect, relative to ``a**(p+1)``."""
        q = self.p + 1.0
        a = self.sup_norm
        ub = self.normalized()
        # divide through by a**q to stay in range
        lhs = 0.5 * (self.du / a ** (q / 2)) ** 2 + ub**q / q
        return float(np.max(np.abs(lhs - 1.0 / q)))

    def boundary_residual(self) -> float:
        """Relative defect of ``a**(p+1)/(p+1) = u'(1)**2/2``."""
        q = self.p + 1.0
        lhs = 1.0 / q
        rhs = 0.5 * (self.boundary_slope / self.sup_norm ** (q / 2)) ** 2
        return abs(lhs - rhs) / lhs

    def check(self) -> dict:
        """Residuals for every type invariant, as a flat dictionary."""
        d2 = np.diff(self.u, 2)
        scale = self.sup_norm
        return {
            "center_value": abs(self.u[0] - self.sup_norm) / scale,
            "center_slope": abs(self.du[0]),
            "boundary_value": abs(self.u[-1]) / scale,
            "decreasing": bool(np.all(np.diff(self.u) < 0)),
            "concave": bool(np.all(d2 <= 1e-12 * scale)),
            "energy": self.energy_residual(),
            "boundary": self.boundary_residual(),
        }


def evaluate(sol: LaneEmdenSolution, t):
    """Cubic Hermite interpolation of ``(u, u')`` at ``t`` in ``[0, 1]``.

    Exact at the grid nodes.  Scalar input gives a pair of floats.
    """
    scalar = np.ndim(t) == 0
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0) or np.any(tt > 1.0) or np.any(np.isnan(tt)):
        raise DomainError("t must lie in [0, 1]")
    sp = sol._spline
    u = sp(tt)
    du = sp(tt, 1)
    # the spline reproduces nodes up to rounding; make it exact
    idx = np.rint(tt * (sol.n - 1)).astype(int)
    hit = np.isclose(tt, sol.t[idx], rtol=0.0, atol=1e-15)
    u = np.where(hit, sol.u[idx], u)
    du = np.where(hit, sol.du[idx], du)
    if scalar:
        return float(u), float(du)
    return u, du


@dataclass(frozen=True)
class RescaledSolution:
    """``u_{p,L}(y) = L**(-2/(p-1)) u_p(y/L)`` on ``[0, L]``."""

    L: float
    base: LaneEmdenSolution

    @property
    def p(self) -> float:
        return self.base.p

    @property
    def value_scale(self) -> float:
        return self.L ** (-2.0 / (self.p - 1.0))

    @property
    def slope_scale(self) -> float:
        return self.L ** (-(self.p + 1.0) / (self.p - 1.0))

    @property
    def y(self) -> np.ndarray:
        return self.L * self.base.t

    @property
    def values(self) -> np.ndarray:
        return self.value_scale * self.base.u

    @property
    def derivs(self) -> np.ndarray:
        return self.slope_scale * self.base.du

    @property
    def sup_norm(self) -> float:
        return self.value_scale * self.base.sup_norm

    @property
    def boundary_slope(self) -> float:
        return self.slope_scale * self.base.boundary_slope

    def evaluate(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 0) or np.any(y > self.L):
            raise DomainError(f"y must lie in [0, {self.L}]")
        u, du = evaluate(self.base, y / self.L)
        return self.value_scale * u, self.slope_scale * du


def rescale_to_length(sol: LaneEmdenSolution, L) -> RescaledSolution:
    """Exact algebraic rescaling of the unit-interval solution to ``(0, L)``."""
    L = float(L)
    if not math.isfinite(L) or L <= 0:
        raise DomainError(f"L must be positive, got {L!r}")
    return RescaledSolution(L=L, base=sol)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def _scale_free_rhs(p):
    def rhs(x, y):
        v = y[0]
        return (y[1], -math.exp(p * math.log(v)) if v > 0.0 else 0.0)

    return rhs


def shoot_first_zero(p: float, rtol: float = IVP_RTOL, atol: float = IVP_ATOL):
    """Integrate ``v'' = -v**p``, ``v(0)=1``, ``v'(0)=0`` to the first zero.

    Returns the ``solve_ivp`` result; its first terminal event is the zero ``T``.
    """
    p = check_exponent(p)

    def hit_zero(x, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1
    res = solve_ivp(
        _scale_free_rhs(p),
        (0.0, 1e4),
        (1.0, 0.0),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=hit_zero,
        dense_output=True,
    )
    if res.status == -1 or not len(res.t_events[0]):
        raise ConvergenceError(
            f"shooting for p={p} failed before the first zero: {res.message} "
            f"(last reached x={res.t[-1]:.6g} in the scale-free variable)",
            estimate=float(res.t[-1]),
        )
    return res


def _solve_ivp_mode(p, n, rtol, atol):
    res = shoot_first_zero(p, rtol, atol)
    T = float(res.t_events[0][0])
    la = 2.0 * math.log(T) / (p - 1.0)
    if la * (p + 1.0) > _LOG_MAX:
        raise DomainError(f"a(p)**(p+1) overflows for p={p}; the solution is not representable")
    a = math.exp(la)
    t = np.linspace(0.0, 1.0, n)
    y = res.sol(T * t)
    v, dv = y[0], y[1]
    v[0], dv[0] = 1.0, 0.0
    # T is the located zero of v
    v[-1], dv[-1] = 0.0, res.y_events[0][0][1]
    u = a * v
    du = a * T * dv
    info = {"T": T, "nfev": int(res.nfev)}
    return t, u, du, a, T * T, info


def _inverse_time(targets, q, J, panels=128, order=16):
    """Solve ``G(w) = J t`` for each target ``t``, ``G(w) = int_0^w 2v/sqrt(1-(1-v^2)^q) dv``."""
    x, wts = _gauss_legendre(order)
    # reference nodes on [0, 1]
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    xi = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wi = (half[:, None] * wts[None, :]).ravel()

    def G(w):
        return w * (_time_integrand(w[:, None] * xi[None, :], q) @ wi)

    rhs = J * targets
    # G is convex and increasing, so Newton from w = 1 decreases monotonically
    w = np.ones_like(targets)
    for _ in range(200):
        g = _time_integrand(w, q)
        w_new = np.clip(w - (G(w) - rhs) / g, 0.0, 1.0)
        change = np.max(np.abs(w_new - w))
        w = w_new
        if change <= 1e-15:
            return w
    raise ConvergenceError(
        "inversion of the first integral did not converge", estimate=float(change)
    )


def _solve_quadrature_mode(p, n):
    q = p + 1.0
    J, _ = first_integral_constant(p)
    k = 0.5 * q * J * J
    la = math.log(k) / (p - 1.0)
    if la * q > _LOG_MAX:
        raise DomainError(f"a(p)**(p+1) overflows for p={p}; the solution is not representable")
    a = math.exp(la)
    t = np.linspace(0.0, 1.0, n)
    w = _inverse_time(t, q, J)
    w[0], w[-1] = 0.0, 1.0
    u = a * (1.0 - w * w)
    du = -math.sqrt(2.0 / q) * math.exp(0.5 * q * la) * np.sqrt(_one_minus_power(w * w, q))
    return t, u, du, a, k, {"J": J}


@lru_cache(maxsize=128)
def _solve_cached(p, n, method, rtol, atol):
    if method == "ivp":
        t, u, du, a, k, info = _solve_ivp_mode(p, n, rtol, atol)
    else:
        t, u, du, a, k, info = _solve_quadrature_mode(p, n)
    return LaneEmdenSolution(
        p=p,
        t=_frozen(t),
        u=_frozen(u),
        du=_frozen(du),
        sup_norm=a,
        sup_norm_power=k,
        method=method,
        info=info,
    )


def solve_unit(
    p,
    n: int = DEFAULT_N,
    *,
    method: str = "auto",
    rtol: float = IVP_RTOL,
    atol: float = IVP_ATOL,
) -> LaneEmdenSolution:
    """Positive solution of ``-u'' = u**p`` on ``[0, 1]``, ``u'(0) = u(1) = 0``.

    Parameters
    ----------
    p : float
        Exponent, ``p > 1``.
    n : int
        Number of uniformly spaced nodes on ``[0, 1]`` (at least 33).
    method : {"auto", "ivp", "quadrature"}
        ``"auto"`` shoots for ``p <= 300`` and inverts the first integral above.
    rtol, atol : float
        Tolerances of the embedded Runge-Kutta pair (ivp mode only).

    Results are cached; the returned object is immutable.
    """
    p = check_exponent(p)
    n = int(n)
    if n < MIN_N:
        raise DomainError(f"n must be at least {MIN_N}, got {n}")
    if method == "auto":
        method = "ivp" if p <= IVP_MAX_P else "quadrature"
    if method not in ("ivp", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if not (rtol > 0 and atol > 0):
        raise DomainError("tolerances must be positive")
    return _solve_cached(p, n, method, float(rtol), float(atol))


@dataclass(frozen=True)
class IntegralIdentities:
    grad_sq: float
    power_integral: float
    I_p: float
    boundary_residual: float


def integral_identities(sol: LaneEmdenSolution, order: int = 4) -> IntegralIdentities:
    """``int_I u'^2`` and ``int_I u^(p+1)`` over ``I = (-1, 1)``.

    Both integrals use a Gauss rule on every grid cell applied to the Hermite
    interpolant, doubled for the even extension.
    """
    x, w = _gauss_legendre(order)
    h = sol.t[1] - sol.t[0]
    mid = 0.5 * (sol.t[1:] + sol.t[:-1])
    nodes = np.clip((mid[:, None] + 0.5 * h * x[None, :]).ravel(), 0.0, 1.0)
    weights = np.tile(0.5 * h * w, len(mid))
    u, du = evaluate(sol, nodes)
    a = sol.sup_norm
    q = sol.p + 1.0
    ub = np.maximum(u / a, 0.0)
    # factor a**(p+1) out of both integrals
    scale = a**q
    grad_sq = 2.0 * float(weights @ (du * du))
    power = 2.0 * float(weights @ ub**q) * scale
    I_p = power ** ((sol.p - 1.0) / q)
    return IntegralIdentities(grad_sq, power, I_p, sol.boundary_residual())
