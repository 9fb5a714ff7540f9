"""Stable and unstable cylinders through the sign of h'(1).

Run with ``python3 demos/03_stability.py``.
"""

import numpy as np

from lane_emden_lab import stability as st
from lane_emden_lab.cross_sections import Disk, lambda1

# %% Near p = 1 the verdict flips close to pi^2/4
for lam in (1.0, 2.0, 2.4, 2.5, 3.0):
    v = st.classify(1.01, lam)
    print(f"p=1.01 lambda={lam:<4} {v.verdict.name:<9} margin={v.margin:.4f}")
r = st.threshold_lambda(1.01)
print("threshold:", r.lambda_star, "bracket width", r.width)

# %% A cylinder is decided through lambda = L^2 lambda_1(omega)
for L in (0.25, 0.5, 1.0):
    v = st.classify_cylinder(1.01, L, Disk(1.0))
    print(f"disk, L={L}: lambda={L * L * lambda1(Disk(1.0)):.4f} -> {v.verdict.name}")

# %% For large p every admissible lambda is stable
print(st.threshold_lambda(50.0).as_dict())

# %% A small phase diagram
pd = st.phase_diagram([1.01, 1.05, 1.2], np.linspace(1.5, 3.5, 9))
for i, p in enumerate(pd.p_grid):
    print(f"p={p:<5g}", " ".join(v.name[0] for v in pd.verdicts[i]), " threshold ~", pd.thresholds[i])
print("(S = stable, U = unstable, I = inapplicable)")
