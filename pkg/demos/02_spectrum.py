"""Spectrum of the linearized operator -d^2/dt^2 - p u_p^(p-1).

Run with ``python3 demos/02_spectrum.py``.
"""

import math

from lane_emden_lab import core, spectral as sp

# %% Finite differences and Prüfer shooting side by side
for p in (1.01, 2.0, 5.0, 50.0):
    q = sp.Potential.lane_emden(p)
    pairs = sp.dirichlet_eigs(q, 3)
    row = [f"{pr.alpha:12.6f}" for pr in pairs]
    check = [f"{abs(pr.alpha - sp.prufer_eig_oracle(q, pr.k)):.1e}" for pr in pairs]
    print(f"p={p:<5g} alpha_1..3 = {' '.join(row)}   |FD - Prufer| = {' '.join(check)}")

# %% alpha_1 mu_p^2 approaches -1/2 for large p
for p in (20.0, 50.0, 100.0, 200.0):
    print(f"p={p:<5g} alpha_1 mu^2 = {sp.alpha1(p) * core.solve_unit(p).mu ** 2:.5f}")

# %% Nondegeneracy of the cylinder solution (zero is never an eigenvalue)
for p in (1.01, 2.0, 5.0):
    r = sp.nondegeneracy_report(p, 1.0, math.pi**2)
    print(f"p={p:<5g} zero_gap={r.zero_gap:.4f} margin={r.margin:.4f} nondegenerate={r.nondegenerate}")
