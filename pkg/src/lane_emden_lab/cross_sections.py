"""First nontrivial Neumann eigenvalue of a few cylinder cross-sections.

The stability criterion only needs the scalar ``lambda_1(omega)``; arbitrary
cross-sections enter through :class:`Custom`.  Smoothness of a custom section
is not checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConvergenceError, DomainError


def _positive(name, x) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"{name} must be positive, got {x!r}")
    return x


@dataclass(frozen=True)
class Interval:
    a: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("interval length", self.a))

    def scaled(self, s: float) -> "Interval":
        return Interval(self.a * s)


@dataclass(frozen=True)
class Rectangle:
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("side a", self.a))
        object.__setattr__(self, "b", _positive("side b", self.b))

    def scaled(self, s: float) -> "Rectangle":
        return Rectangle(self.a * s, self.b * s)


@dataclass(frozen=True)
class Disk:
    R: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "R", _positive("radius", self.R))

    def scaled(self, s: float) -> "Disk":
        return Disk(self.R * s)


@dataclass(frozen=True)
class Custom:
    """A cross-section known only through its eigenvalue."""

    lambda1: float

    def __post_init__(self):
        object.__setattr__(self, "lambda1", _positive("lambda1", self.lambda1))


CrossSection = Interval | Rectangle | Disk | Custom


def bessel_j(nu: int, x: float) -> float:
    """``J_nu(x)`` for integer ``nu >= 0`` by its power series.

    Summation stops once a term drops below ``1e-16`` relative to the sum;
    intended for moderate ``x`` (the series is used on ``[0, 3]`` here).
    """
    x = float(x)
    half = 0.5 * x
    term = half**nu / math.factorial(nu)
    total = term
    m = 0
    while True:
        m += 1
        term *= -(half * half) / (m * (m + nu))
        total += term
        if abs(term) < 1e-16 * max(abs(total), 1e-300) or m > 200:
            return total


def bessel_j1_prime(x: float) -> float:
    """``J_1'(x)`` by the differentiated series of ``J_1``."""
    x = float(x)
    half = 0.5 * x
    # J_1 = sum_m (-1)^m (x/2)^(2m+1) / (m! (m+1)!)
    term = 0.5  # m = 0 derivative of x/2
    total = term
    m = 0
    c = half
    while True:
        m += 1
        c *= -(half * half) / (m * (m + 1))
        term = c * (2 * m + 1) / x
        total += term
        if abs(term) < 1e-16 * max(abs(total), 1e-300) or m > 200:
            return total


def bessel_j1_prime_recurrence(x: float) -> float:
    """Independent evaluation ``J_1' = J_0 - J_1 / x``."""
    return bessel_j(0, x) - bessel_j(1, x) / x


@lru_cache(maxsize=1)
def bessel_j1prime_root(lo: float = 1.0, hi: float = 3.0, tol: float = 1e-10) -> float:
    """First positive zero of ``J_1'`` by bisection on ``[lo, hi]``."""
    flo, fhi = bessel_j1_prime(lo), bessel_j1_prime(hi)
    if not flo * fhi < 0:
        raise ConvergenceError(
            f"J_1' does not change sign on [{lo}, {hi}] ({flo:.3e}, {fhi:.3e})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = bessel_j1_prime(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    check = bessel_j1_prime_recurrence(root)
    if abs(check) > 1e-9:
        raise ConvergenceError(f"series disagree at the root: J_0 - J_1/x = {check:.3e}")
    return root


def lambda1(section) -> float:
    """First nontrivial Neumann eigenvalue ``lambda_1(omega)``."""
    if isinstance(section, Interval):
        return (math.pi / section.a) ** 2
    if isinstance(section, Rectangle):
        return (math.pi / max(section.a, section.b)) ** 2
    if isinstance(section, Disk):
        return (bessel_j1prime_root() / section.R) ** 2
    if isinstance(section, Custom):
        return section.lambda1
    raise DomainError(f"unknown cross-section {section!r}")


def parse_section(kind: str, *dims: float):
    """Build a section from a name and its dimensions (used by the CLI)."""
    kind = kind.lower()
    table = {"interval": (Interval, 1), "rectangle": (Rectangle, 2), "disk": (Disk, 1), "custom": (Custom, 1)}
    if kind not in table:
        raise DomainError(f"unknown section {kind!r}; choose from {', '.join(table)}")
    cls, count = table[kind]
    if len(dims) != count:
        raise DomainError(f"section {kind} needs {count} dimension(s), got {len(dims)}")
    return cls(*dims)
