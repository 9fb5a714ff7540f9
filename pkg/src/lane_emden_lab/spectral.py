"""Spectrum of the linearized operator ``-d^2/dt^2 - p u_p^(p-1)``.

Two independent methods compute Dirichlet eigenvalues on ``(-1, 1)``:

* :func:`dirichlet_eigs` -- second-order finite differences, eigenvalues of
  the symmetric tridiagonal matrix by Sturm-sequence bisection, Richardson
  extrapolated over the grids ``n`` and ``2n - 1``;
* :func:`prufer_eig_oracle` -- Prüfer phase shooting with bracketed root
  finding on the terminal phase.

The half-interval problem ``z'(0) = z(L) = 0`` is handled by the even
extension (authoritative) and cross-checked with a ghost-node Neumann
discretization on ``(0, L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .core import IVP_ATOL, IVP_RTOL, check_exponent, solve_unit
from .errors import ConvergenceError, DomainError, MethodDisagreement

DEFAULT_N = 4097
MIN_N = 257
AGREE_TOL = 1e-6
BISECT_TOL = 1e-10


@dataclass(frozen=True)
class Potential:
    """An even potential ``q(t)`` on ``[-1, 1]``.

    ``func`` is vectorized.  For the Lane-Emden potential ``p`` and
    ``sup_norm_power`` are set, which lets the Prüfer oracle integrate the
    profile alongside the phase instead of interpolating it.
    """

    func: Callable
    name: str = "custom"
    p: Optional[float] = None
    sup_norm_power: Optional[float] = None
    n_base: Optional[int] = None

    @classmethod
    def constant(cls, c: float) -> "Potential":
        c = float(c)
        return cls(func=lambda t: np.full(np.shape(t), c), name=f"const({c:g})")

    @classmethod
    def lane_emden(cls, p, n_base: int = DEFAULT_N) -> "Potential":
        """``p u_p^(p-1)`` built from ``solve_unit(p, n_base)``.

        With ``n_base`` nodes on ``[0, 1]`` the finite-difference grids of
        ``2 n_base - 1`` and ``n_base`` points on ``[-1, 1]`` fall on stored nodes.
        """
        p = check_exponent(p)
        sol = solve_unit(p, n_base)
        return cls(
            func=sol.potential,
            name=f"lane_emden(p={p:g})",
            p=p,
            sup_norm_power=sol.sup_norm_power,
            n_base=n_base,
        )

    def __call__(self, t):
        return self.func(t)

    def samples(self, n: int):
        """Uniform grid of ``n`` points on ``[-1, 1]`` and ``q`` on it."""
        t = np.linspace(-1.0, 1.0, n)
        return t, np.asarray(self.func(t), dtype=float)

    def shifted(self, c: float) -> "Potential":
        """``q + c``; the Lane-Emden tag is dropped."""
        f = self.func
        return Potential(func=lambda t: f(t) + c, name=f"{self.name}+{c:g}")


@dataclass(frozen=True)
class EigenPair:
    """One Dirichlet eigenpair; ``w`` has sup-norm 1.

    Even eigenfunctions are positive at ``t = 0``, odd ones increase there.
    ``residual`` is the discrete L2 defect of ``-w'' - q w - alpha w`` on the
    fine grid relative to ``||w||`` and ``1 + |alpha| + max|q|``.  The max-norm
    defect is dominated by rounding in the eigenvector (about eps * 4/h^2).
    """

    k: int
    alpha: float
    t: np.ndarray
    w: np.ndarray
    alpha_coarse: float
    alpha_fine: float
    residual: float


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


def sturm_count(d, e, x) -> np.ndarray:
    """Number of eigenvalues below each shift in ``x`` of the symmetric
    tridiagonal matrix with diagonal ``d`` and off-diagonal ``e``.

    Counts negative pivots of the LDL^T factorization of ``T - x I``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e2 = np.asarray(e, dtype=float) ** 2
    tiny = np.finfo(float).tiny
    piv = d[0] - x
    count = (piv < 0).astype(int)
    for i in range(1, len(d)):
        piv = np.where(piv == 0.0, -tiny, piv)
        piv = d[i] - x - e2[i - 1] / piv
        count += piv < 0
    return count


def _fd_matrix(q_interior, h):
    d = 2.0 / h**2 - q_interior
    e = np.full(len(d) - 1, -1.0 / h**2)
    return d, e


def _fd_dirichlet(q, n, k_max, vectors=False):
    t, qv = q.samples(n)
    h = t[1] - t[0]
    d, e = _fd_matrix(qv[1:-1], h)
    out = eigh_tridiagonal(
        d,
        e,
        eigvals_only=not vectors,
        select="i",
        select_range=(0, k_max - 1),
        lapack_driver="stebz",
        tol=BISECT_TOL,
    )
    return (t, qv, h, d, e) + ((out,) if not vectors else out)


def _normalize(w, t, k):
    w = w / np.max(np.abs(w))
    mid = len(t) // 2
    ref = w[mid] if k % 2 == 1 else w[mid + 1] - w[mid - 1]
    return -w if ref < 0 else w


def dirichlet_eigs(q: Potential, k_max: int = 1, n: int = DEFAULT_N) -> list[EigenPair]:
    """First ``k_max`` eigenpairs of ``-w'' - q w = alpha w``, ``w(+-1) = 0``.

    ``n`` (odd, at least 257) is the coarse grid; the fine grid has
    ``2n - 1`` points and the eigenvalues are Richardson extrapolated as
    ``(4 alpha_fine - alpha_coarse) / 3``.
    """
    n = int(n)
    k_max = int(k_max)
    if n < MIN_N or n % 2 == 0:
        raise DomainError(f"n must be odd and at least {MIN_N}, got {n}")
    if k_max < 1:
        raise DomainError("k_max must be at least 1")
    if k_max > (n - 2) // 8:
        raise DomainError(f"k_max={k_max} exceeds the modes resolvable on n={n} points")
    *_, coarse = _fd_dirichlet(q, n, k_max)
    t, qv, h, d, e, fine, vecs = _fd_dirichlet(q, 2 * n - 1, k_max, vectors=True)
    if len(coarse) < k_max or len(fine) < k_max:
        raise ConvergenceError(f"bisection returned fewer than {k_max} eigenvalues")
    # confirm the Sturm counts bracket every returned eigenvalue
    gap = 1e3 * BISECT_TOL * max(1.0, np.max(np.abs(fine)))
    counts = sturm_count(d, e, np.concatenate([fine - gap, fine + gap]))
    expect = np.concatenate([np.arange(k_max), np.arange(1, k_max + 1)])
    if not np.array_equal(counts, expect):
        bad = np.flatnonzero(counts != expect)[0] % k_max
        raise ConvergenceError(
            f"Sturm count does not bracket eigenvalue {bad + 1} in "
            f"[{fine[bad] - gap:.12g}, {fine[bad] + gap:.12g}]"
        )
    extrap = (4.0 * fine - coarse) / 3.0
    scale = 1.0 + np.max(np.abs(qv))
    pairs = []
    for j in range(k_max):
        w = np.zeros(len(t))
        w[1:-1] = vecs[:, j]
        w = _normalize(w, t, j + 1)
        lap = (w[:-2] - 2 * w[1:-1] + w[2:]) / h**2
        res = -lap - qv[1:-1] * w[1:-1] - extrap[j] * w[1:-1]
        w.setflags(write=False)
        pairs.append(
            EigenPair(
                k=j + 1,
                alpha=float(extrap[j]),
                t=t,
                w=w,
                alpha_coarse=float(coarse[j]),
                alpha_fine=float(fine[j]),
                residual=float(
                    np.sqrt(np.mean(res**2) / np.mean(w[1:-1] ** 2)) / (scale + abs(extrap[j]))
                ),
            )
        )
    return pairs


# ---------------------------------------------------------------------------
# Prüfer oracle
# ---------------------------------------------------------------------------


def _phase_end(q: Potential, alpha: float, k: int, rtol: float, atol: float) -> float:
    """Terminal Prüfer phase at ``t = 1`` starting from the symmetry point.

    Odd ``k`` (even eigenfunction) starts at ``theta = pi/2``; even ``k``
    (odd eigenfunction) starts at ``theta = 0``.
    """
    theta0 = 0.5 * math.pi if k % 2 == 1 else 0.0
    if q.p is not None:
        p, kk = q.p, q.sup_norm_power

        def rhs(t, y):
            v, dv, th = y
            vp = math.exp((p - 1.0) * math.log(v)) if v > 0.0 else 0.0
            s, c = math.sin(th), math.cos(th)
            return (dv, -kk * vp * v, c * c + (alpha + p * kk * vp) * s * s)

        y0 = (1.0, 0.0, theta0)
    else:
        f = q.func

        def rhs(t, y):
            s, c = math.sin(y[0]), math.cos(y[0])
            return (c * c + (alpha + float(f(t))) * s * s,)

        y0 = (theta0,)
    res = solve_ivp(rhs, (0.0, 1.0), y0, method="DOP853", rtol=rtol, atol=atol)
    if res.status != 0:
        raise ConvergenceError(f"Prüfer integration failed: {res.message}")
    return float(res.y[-1, -1])


def prufer_eig_oracle(
    q: Potential,
    k: int,
    *,
    tol: float = 1e-12,
    rtol: float = IVP_RTOL,
    atol: float = IVP_ATOL,
    max_iter: int = 200,
) -> float:
    """``k``-th Dirichlet eigenvalue on ``(-1, 1)`` by Prüfer phase shooting.

    The phase ``theta`` of ``(w', w) = r (cos theta, sin theta)`` obeys
    ``theta' = cos^2 + (alpha + q) sin^2`` and is increasing in ``alpha``; the
    eigenvalue is the root of ``theta(1) - target`` with target
    ``ceil(k/2) pi`` (odd ``k``) or ``(k/2) pi`` (even ``k``).  The potential
    must be even.
    """
    k = int(k)
    if k < 1:
        raise DomainError("k must be at least 1")
    target = math.ceil(k / 2) * math.pi if k % 2 == 1 else (k // 2) * math.pi
    _, qs = q.samples(1025)
    lo = -float(np.max(qs)) - 1.0
    hi = (k * math.pi / 2) ** 2 - float(np.min(qs)) + 1.0
    F = lambda a: _phase_end(q, a, k, rtol, atol) - target  # noqa: E731
    flo, fhi = F(lo), F(hi)
    if not (flo < 0 < fhi):
        raise ConvergenceError(
            f"Prüfer bracket [{lo:.6g}, {hi:.6g}] does not enclose eigenvalue {k}"
        )
    try:
        root, r = brentq(
            F, lo, hi, xtol=tol * max(1.0, abs(lo)), rtol=1e-15, maxiter=max_iter,
            full_output=True,
        )
    except RuntimeError as exc:
        raise ConvergenceError(f"Prüfer shooting did not converge: {exc}") from None
    return float(root)


# ---------------------------------------------------------------------------
# first eigenvalue and the half-interval problem
# ---------------------------------------------------------------------------


def check_agreement(a: float, b: float, tol: float = AGREE_TOL, what: str = "eigenvalue"):
    """Raise :class:`MethodDisagreement` unless ``|a - b| <= tol max(1, |a|)``."""
    diff = abs(a - b)
    if not diff <= tol * max(1.0, abs(a)):
        raise MethodDisagreement(
            f"{what}: methods disagree ({a!r} vs {b!r}, difference {diff:.3e})",
            estimate=diff,
        )


@lru_cache(maxsize=256)
def _alpha1_cached(p, n, tol):
    q = Potential.lane_emden(p, n)
    fd = dirichlet_eigs(q, 1, n)[0].alpha
    pr = prufer_eig_oracle(q, 1)
    check_agreement(fd, pr, tol, what=f"alpha_1(p={p})")
    lower = -p * q.sup_norm_power
    if not fd > lower:
        raise ConvergenceError(f"alpha_1(p={p}) = {fd} violates alpha_1 > -p a^(p-1) = {lower}")
    return fd


def alpha1(p, *, n: int = DEFAULT_N, tol: float = AGREE_TOL) -> float:
    """First eigenvalue of the linearized operator on ``(-1, 1)``.

    Finite differences and the Prüfer oracle must agree to ``tol`` relative
    to ``max(1, |alpha_1|)``; otherwise :class:`MethodDisagreement` is raised.
    """
    return _alpha1_cached(check_exponent(p), int(n), float(tol))


def mixed_eigs(p, L: float = 1.0, k_max: int = 1, n: int = DEFAULT_N) -> np.ndarray:
    """Eigenvalues of ``-z'' - p u_{p,L}^(p-1) z = alpha z``, ``z'(0) = z(L) = 0``.

    Even extension: these are the odd-indexed Dirichlet eigenvalues on
    ``(-1, 1)`` divided by ``L**2``.
    """
    L = _check_length(L)
    q = Potential.lane_emden(p, n)
    pairs = dirichlet_eigs(q, 2 * int(k_max) - 1, n)
    return np.array([pairs[2 * j].alpha for j in range(int(k_max))]) / L**2


def mixed_eigs_ghost(p, L: float = 1.0, k_max: int = 1, m: int = DEFAULT_N) -> np.ndarray:
    """Same eigenvalues by a ghost-node Neumann discretization on ``(0, L)``.

    ``m`` nodes on ``[0, L]``; Richardson extrapolated with ``2m - 1`` nodes.
    The Neumann row is symmetrized by scaling the first unknown by ``sqrt 2``.
    """
    L = _check_length(L)
    p = check_exponent(p)
    sol = solve_unit(p, m)

    def solve(mm):
        y = np.linspace(0.0, L, mm)
        h = y[1] - y[0]
        qv = sol.potential(y / L) / L**2
        d = 2.0 / h**2 - qv[:-1]
        e = np.full(mm - 2, -1.0 / h**2)
        e[0] *= math.sqrt(2.0)
        return eigh_tridiagonal(
            d, e, eigvals_only=True, select="i", select_range=(0, k_max - 1),
            lapack_driver="stebz", tol=BISECT_TOL,
        )

    coarse = solve(m)
    fine = solve(2 * m - 1)
    return (4.0 * fine - coarse) / 3.0


def _check_length(L) -> float:
    L = float(L)
    if not math.isfinite(L) or L <= 0:
        raise DomainError(f"L must be positive, got {L!r}")
    return L


def alpha1_at_length(p, L, *, n: int = DEFAULT_N, tol: float = 1e-5) -> float:
    """``alpha_{1,L}(p) = alpha_1(p) / L**2``, cross-checked on ``(0, L)`` directly."""
    p = check_exponent(p)
    L = _check_length(L)
    scaled = alpha1(p, n=n) / L**2
    direct = float(mixed_eigs_ghost(p, L, 1, n)[0])
    check_agreement(scaled, direct, tol, what=f"alpha_1,L(p={p}, L={L})")
    return scaled


@dataclass(frozen=True)
class NondegeneracyReport:
    p: float
    L: float
    lambda1_omega: float
    alpha1_L: float
    margin: float
    zero_gap: float
    nondegenerate: bool


def nondegeneracy_report(
    p, L, lambda1_omega, *, k_max: int = 5, zero_tol: float = 1e-6, n: int = DEFAULT_N
) -> NondegeneracyReport:
    """Both sufficient nondegeneracy conditions for the cylinder solution.

    ``zero_gap`` is the distance from zero of the first ``k_max`` eigenvalues
    of the half-interval problem; ``margin = lambda1_omega + alpha_{1,L}``.
    """
    p = check_exponent(p)
    L = _check_length(L)
    lam = float(lambda1_omega)
    if not math.isfinite(lam) or lam <= 0:
        raise DomainError(f"lambda1_omega must be positive, got {lambda1_omega!r}")
    a1L = alpha1_at_length(p, L, n=n)
    eigs = mixed_eigs(p, L, k_max, n)
    gap = float(np.min(np.abs(eigs)))
    margin = lam + a1L
    return NondegeneracyReport(
        p=p,
        L=L,
        lambda1_omega=lam,
        alpha1_L=a1L,
        margin=margin,
        zero_gap=gap,
        nondegenerate=bool(gap > zero_tol and margin > 0),
    )
