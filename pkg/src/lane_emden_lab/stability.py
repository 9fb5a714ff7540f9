"""Stability of the cylinder solution as an energy-stationary pair.

With ``lambda = L**2 * lambda_1(omega)`` the pair is decided on the unit
interval by the auxiliary linear problem

    h'' = (lambda - p u_p**(p-1)) h  on (0, 1),   h'(0) = 0,   h(1) = -u_p'(1):

the pair is stable when ``h'(1) > 0`` and unstable when ``h'(1) < 0``.  The
criterion is only asserted when ``lambda + alpha_1(p) > 0``.

``h`` is built by linear shooting: ``h_1(0) = 1``, ``h_1'(0) = 0``, scaled by
``-u_p'(1) / h_1(1)``.  The Lane-Emden profile is integrated jointly in the
scale-free variable ``x = T t`` (``T**2 = a**(p-1)``), where ``v'' = -v**p``
and the potential is ``p T**2 v**(p-1)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .core import check_exponent, solve_unit
from .cross_sections import lambda1
from .errors import ConvergenceError, CriterionInapplicable, DomainError, InternalConsistencyError
from .spectral import alpha1

H_RTOL = 1e-11
H_ATOL = 1e-14
MARGINAL_BAND = 1e-8
THRESHOLD_TOL = 1e-6
SCAN_POINTS = 41
DEFAULT_N = 1025


class Verdict(enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"
    INAPPLICABLE = "CriterionInapplicable"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class HProfile:
    """Samples of ``h`` and ``h'`` on a uniform grid of ``[0, 1]``."""

    p: float
    lam: float
    t: np.ndarray
    h: np.ndarray
    dh: np.ndarray
    boundary_slope: float
    margin: float

    @property
    def end_slope(self) -> float:
        return float(self.dh[-1])

    @property
    def positive(self) -> bool:
        return bool(np.all(self.h > 0))

    def check(self) -> dict:
        scale = abs(self.boundary_slope)
        return {
            "center_slope": abs(self.dh[0]) / max(scale, abs(self.h[0])),
            "boundary_value": abs(self.h[-1] + self.boundary_slope) / scale,
            "positive": self.positive,
        }


@dataclass(frozen=True)
class StabilityVerdict:
    verdict: Verdict
    end_slope: float
    margin: float
    p: float = math.nan
    lam: float = math.nan

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.name,
            "end_slope": self.end_slope,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of :func:`threshold_lambda`.

    ``lambda_star`` is ``None`` when the verdict does not change over the
    scanned ``window``.  ``sign_changes`` counts flips seen in the coarse scan;
    more than one is a diagnostic, the first bracket is the one refined.
    """

    p: float
    window: tuple
    lambda_star: Optional[float] = None
    bracket: Optional[tuple] = None
    sign_changes: int = 0
    scanned: int = 0

    @property
    def found(self) -> bool:
        return self.lambda_star is not None

    @property
    def width(self) -> float:
        return math.nan if self.bracket is None else self.bracket[1] - self.bracket[0]

    def as_dict(self) -> dict:
        if self.found:
            return {
                "lambda_star": self.lambda_star,
                "bracket": list(self.bracket),
                "sign_changes": self.sign_changes,
            }
        return {"no_threshold": True, "window": list(self.window)}


@dataclass(frozen=True)
class PhaseDiagram:
    p_grid: np.ndarray
    lambda_grid: np.ndarray
    verdicts: np.ndarray
    end_slopes: np.ndarray
    thresholds: tuple = field(default=())

    @property
    def shape(self) -> tuple:
        return self.verdicts.shape

    def rows(self):
        """``(p, lambda, verdict, end_slope)`` in grid order."""
        for i, p in enumerate(self.p_grid):
            for j, lam in enumerate(self.lambda_grid):
                yield float(p), float(lam), self.verdicts[i, j], float(self.end_slopes[i, j])


# ---------------------------------------------------------------------------


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite, got {lam!r}")
    return lam


def margin(p, lam) -> float:
    """``lambda + alpha_1(p)``; the criterion applies when it is positive."""
    return float(lam) + alpha1(p)


def shoot_h(p, lam, t, rtol: float = H_RTOL, atol: float = H_ATOL):
    """Unscaled ``(h_1, h_1')`` at ``t`` with ``h_1(0) = 1``, ``h_1'(0) = 0``."""
    sol = solve_unit(p)
    k = sol.sup_norm_power
    T = math.sqrt(k)
    lt = lam / k

    def rhs(x, y):
        v, dv, h, dh = y
        vp = math.exp((p - 1.0) * math.log(v)) if v > 0.0 else 0.0
        return (dv, -v * vp, dh, (lt - p * vp) * h)

    res = solve_ivp(
        rhs,
        (0.0, T),
        (1.0, 0.0, 1.0, 0.0),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=T * np.asarray(t, dtype=float),
    )
    if res.status != 0 or not np.all(np.isfinite(res.y)):
        raise ConvergenceError(
            f"h-shooting failed for p={p}, lambda={lam}: {res.message}",
            estimate=float(res.t[-1]) / T if len(res.t) else 0.0,
        )
    return res.y[2], T * res.y[3], sol.boundary_slope


def solve_h(p, lam, n: int = DEFAULT_N, *, check_margin: bool = True) -> HProfile:
    """The h-profile for ``(p, lambda)``.

    Raises :class:`CriterionInapplicable` when ``lambda + alpha_1(p) <= 0``
    and :class:`InternalConsistencyError` if ``h_1(1) <= 0`` despite a
    positive margin.
    """
    p = check_exponent(p)
    lam = _check_lambda(lam)
    n = int(n)
    if n < 2:
        raise DomainError("n must be at least 2")
    m = margin(p, lam)
    if check_margin and m <= 0:
        raise CriterionInapplicable(
            f"lambda + alpha_1(p) = {m:.6g} <= 0 for p={p}, lambda={lam}", margin=m
        )
    t = np.linspace(0.0, 1.0, n)
    h1, dh1, us = shoot_h(p, lam, t)
    if not h1[-1] > 0:
        if m > 0:
            raise InternalConsistencyError(
                f"h_1(1) = {h1[-1]:.6g} <= 0 although lambda + alpha_1 = {m:.6g} > 0",
                estimate=float(h1[-1]),
            )
        raise CriterionInapplicable(f"h_1(1) = {h1[-1]:.6g} <= 0 outside the admissible window", margin=m)
    c = -us / h1[-1]
    h = c * h1
    dh = c * dh1
    h[-1] = -us
    dh[0] = 0.0
    for a in (t, h, dh):
        a.setflags(write=False)
    return HProfile(p=p, lam=lam, t=t, h=h, dh=dh, boundary_slope=us, margin=m)


def decide(end_slope: float, margin: float, boundary_slope: float, band: float = MARGINAL_BAND) -> Verdict:
    """Map an end slope to a verdict using the marginal band ``band * |u'(1)|``."""
    if not margin > 0:
        return Verdict.INAPPLICABLE
    tol = band * abs(boundary_slope)
    if end_slope > tol:
        return Verdict.STABLE
    if end_slope < -tol:
        return Verdict.UNSTABLE
    return Verdict.MARGINAL


@lru_cache(maxsize=4096)
def _classify(p, lam, band):
    try:
        prof = solve_h(p, lam, 2)
    except CriterionInapplicable as exc:
        return StabilityVerdict(Verdict.INAPPLICABLE, math.nan, exc.margin, p, lam)
    v = decide(prof.end_slope, prof.margin, prof.boundary_slope, band)
    return StabilityVerdict(v, prof.end_slope, prof.margin, p, lam)


def classify(p, lam, band: float = MARGINAL_BAND) -> StabilityVerdict:
    """Verdict for the pair with reduced parameter ``lambda = L**2 lambda_1(omega)``."""
    return _classify(check_exponent(p), _check_lambda(lam), float(band))


def classify_cylinder(p, L, section, band: float = MARGINAL_BAND) -> StabilityVerdict:
    """Verdict for the cylinder ``omega x (-L, L)``; delegates to :func:`classify`."""
    L = float(L)
    if not math.isfinite(L) or L <= 0:
        raise DomainError(f"L must be positive, got {L!r}")
    return classify(p, L * L * lambda1(section), band)


def admissible_window(p) -> tuple:
    """``(max(0, -alpha_1) + eps, 2 p a**(p-1))`` with ``eps = 1e-3 max(1, |alpha_1|)``."""
    p = check_exponent(p)
    a1 = alpha1(p)
    eps = 1e-3 * max(1.0, abs(a1))
    return max(0.0, -a1) + eps, 2.0 * p * solve_unit(p).sup_norm_power


def _sign(v: StabilityVerdict) -> int:
    return {Verdict.STABLE: 1, Verdict.UNSTABLE: -1}.get(v.verdict, 0)


def threshold_lambda(p, *, points: int = SCAN_POINTS, tol: float = THRESHOLD_TOL) -> ThresholdResult:
    """Locate the value of ``lambda`` where the verdict flips.

    Scans ``points`` equally spaced values of the admissible window, then
    bisects the first sign change until the bracket is narrower than ``tol``.
    """
    p = check_exponent(p)
    lo, hi = admissible_window(p)
    grid = np.linspace(lo, hi, int(points))
    signs = [_sign(classify(p, x)) for x in grid]
    flips = [i for i in range(len(grid) - 1) if signs[i] * signs[i + 1] < 0]
    if not flips:
        return ThresholdResult(p=p, window=(lo, hi), scanned=len(grid))
    i = flips[0]
    a, b = float(grid[i]), float(grid[i + 1])
    sa = signs[i]
    while b - a > tol:
        mid = 0.5 * (a + b)
        s = _sign(classify(p, mid))
        if s == 0:
            a = b = mid
            break
        if s == sa:
            a = mid
        else:
            b = mid
    return ThresholdResult(
        p=p,
        window=(lo, hi),
        lambda_star=0.5 * (a + b),
        bracket=(a, b),
        sign_changes=len(flips),
        scanned=len(grid),
    )


def phase_diagram(p_grid, lambda_grid) -> PhaseDiagram:
    """Verdict of every ``(p, lambda)`` cell, rows indexed by ``p``.

    ``thresholds[i]`` is the midpoint of the first flip in row ``i`` (or
    ``None``).
    """
    pg = np.asarray(p_grid, dtype=float)
    lg = np.asarray(lambda_grid, dtype=float)
    if pg.ndim != 1 or lg.ndim != 1 or not len(pg) or not len(lg):
        raise DomainError("grids must be nonempty one-dimensional sequences")
    if np.any(np.diff(pg) < 0) or np.any(np.diff(lg) < 0):
        raise DomainError("grids must be sorted")
    verdicts = np.empty((len(pg), len(lg)), dtype=object)
    slopes = np.full((len(pg), len(lg)), math.nan)
    thresholds = []
    for i, p in enumerate(pg):
        row = [classify(p, lam) for lam in lg]
        verdicts[i] = [v.verdict for v in row]
        slopes[i] = [v.end_slope for v in row]
        s = [_sign(v) for v in row]
        flip = next((j for j in range(len(lg) - 1) if s[j] * s[j + 1] < 0), None)
        thresholds.append(None if flip is None else 0.5 * (lg[flip] + lg[flip + 1]))
    return PhaseDiagram(pg, lg, verdicts, slopes, tuple(thresholds))
