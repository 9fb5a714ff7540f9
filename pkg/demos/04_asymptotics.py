"""Limits p -> infinity and p -> 1 checked at desk scale.

Run with ``python3 demos/04_asymptotics.py``.
"""

import math

from lane_emden_lab import asymptotics as asy

# %% Large p: Green's function, Liouville profile, 2 a^(p+1)/p -> 1
rep = asy.report_large_p([20, 50, 100, 150])
for name, values in rep.metrics.items():
    print(f"{name:<13}", " ".join(f"{v:10.5f}" for v in values))
for name, (slope, _, res) in rep.rates.items():
    print(f"  empirical rate of {name}: p^{slope:.3f} (rms {res:.1e})")

# %% Near one: u_p / a -> cos(pi t / 2), a^(p-1) = pi^2/4 (1 + c~ (p-1)) + ...
rep = asy.report_near_one([1.1, 1.05, 1.01])
for name, values in rep.metrics.items():
    print(f"{name:<11}", " ".join(f"{v:10.5f}" for v in values))
c = asy.c_tilde()
print("c~ =", c, " ln 2 - 1/2 =", math.log(2) - 0.5)
print("slope at p = 1.001:", asy.slope_at(1.001), " predicted:", math.pi**2 / 4 * c)

# %% The h-profile tends to H_lambda(t) = cos(sqrt(pi^2/4 - lambda) t)
print("sup |h/h(0) - H_2| on |t| <= 0.9 at p = 1.005:", asy.h_limit_error(1.005, 2.0))
