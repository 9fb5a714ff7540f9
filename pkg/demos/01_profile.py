"""The positive solution of -u'' = u^p on (-1, 1) and its sup-norm.

Run with ``python3 demos/01_profile.py``.
"""

import math

import numpy as np

from lane_emden_lab import core

# %% Two constructions of the same profile
sol = core.solve_unit(3.0)
quad = core.solve_unit(3.0, method="quadrature")
print("a(3) by shooting      ", sol.sup_norm)
print("a(3) by quadrature    ", core.sup_norm_closed_form(3.0))
print("max |u_ivp - u_quad|  ", np.max(np.abs(sol.u - quad.u)))

# %% Invariants of the sampled solution
for name, value in sol.check().items():
    print(f"  {name:<14} {value}")

# %% The sup-norm across exponents: a^(p-1) never drops below pi^2/4
# a itself overflows near p = 1, so print log a
print("\n     p        log a(p)      a^(p-1)")
for p in (1.001, 1.01, 1.1, 2, 5, 20, 100, 1000):
    k = core.sup_norm_power(p)
    print(f"{p:>7g}  {core.log_sup_norm(p):>12.6g}  {k:>12.8f}")
print("pi^2/4 =", math.pi**2 / 4)

# %% Rescaling to a cylinder of height 2L
r = core.rescale_to_length(sol, 2.0)
print("\nu_{3,2}(0) =", r.sup_norm, " u'_{3,2}(2) =", r.boundary_slope)

# %% Integral identities: int u'^2 = int u^(p+1)
ii = core.integral_identities(sol)
print("grad_sq", ii.grad_sq, "power_integral", ii.power_integral, "I_p", ii.I_p)
