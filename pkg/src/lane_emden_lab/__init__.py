"""Numerical laboratory for the one-dimensional Lane-Emden problem in a cylinder.

``-u'' = u**p`` on ``(-1, 1)`` with ``u(+-1) = 0``: the positive solution,
the spectrum of its linearization, the boundary-slope stability criterion
for cylinders ``omega x (-L, L)`` and the limits ``p -> infinity``, ``p -> 1``.
"""

from .asymptotics import (
    ConvergenceReport,
    LimitConstants,
    RescaledProfile,
    c_tilde,
    fit_rate,
    green,
    limit_constants,
    limit_H,
    limit_W,
    report_large_p,
    report_near_one,
    rescale_near_peak,
)
from .core import (
    LaneEmdenSolution,
    evaluate,
    integral_identities,
    rescale_to_length,
    solve_unit,
    sup_norm_closed_form,
    sup_norm_power,
)
from .cross_sections import Custom, Disk, Interval, Rectangle, bessel_j1prime_root, lambda1
from .errors import (
    ConvergenceError,
    CriterionInapplicable,
    DomainError,
    InternalConsistencyError,
    LaneEmdenError,
    MethodDisagreement,
)
from .spectral import (
    EigenPair,
    Potential,
    alpha1,
    alpha1_at_length,
    dirichlet_eigs,
    mixed_eigs,
    nondegeneracy_report,
    prufer_eig_oracle,
)
from .stability import (
    HProfile,
    PhaseDiagram,
    StabilityVerdict,
    ThresholdResult,
    Verdict,
    classify,
    classify_cylinder,
    phase_diagram,
    solve_h,
    threshold_lambda,
)

__version__ = "0.1.0"
