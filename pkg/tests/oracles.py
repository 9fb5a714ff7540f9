"""Independent reference values computed with mpmath at high precision.

The sup-norm satisfies ``a**(p-1) = (p+1)/2 * J**2`` with
``J = int_0^1 (1 - s**(p+1))**(-1/2) ds = B(1/q, 1/2) / q``, ``q = p + 1``;
the library evaluates ``J`` by Gauss-Legendre quadrature instead.
"""

import mpmath as mp

mp.mp.dps = 40


def sup_norm_power(p):
    p = mp.mpf(p)
    q = p + 1
    J = mp.beta(1 / q, mp.mpf(1) / 2) / q
    return (p + 1) / 2 * J**2


def sup_norm(p):
    return float(sup_norm_power(p) ** (1 / (mp.mpf(p) - 1)))


def half_power_integral(p):
    """``int_0^1 u_p**(p+1) dt`` from the first integral."""
    p = mp.mpf(p)
    q = p + 1
    a = sup_norm_power(p) ** (1 / (p - 1))
    return float(mp.sqrt(q / 2) * a ** (1 + q / 2) * mp.beta((q + 1) / q, mp.mpf(1) / 2) / q)


def bessel_j1prime_root():
    return float(mp.besseljzero(1, 1, derivative=1))
