"""Exact non-local hydrodynamic closure of the linear 1D BGK kinetic equation.

Public surface:

* :mod:`hydroclosure.specfun` -- erf/erfcx/Dawson/Faddeeva with error bounds,
* :mod:`hydroclosure.dispersion` -- the slow eigenvalue lambda*(k, tau),
  critical wave number, and small-tau series machinery,
* :mod:`hydroclosure.operators` -- truncated kinetic operators, eigenvalue
  validation, and slow-eigenvector construction,
* :mod:`hydroclosure.ce` -- exact Chapman-Enskog recursion,
* :mod:`hydroclosure.evolution` -- closure/CE/kinetic time evolution and
  slow-manifold attraction diagnostics,
* :mod:`hydroclosure.cli` -- the ``hydroclosure`` command-line tool.
"""

__version__ = "0.1.0"

from .dispersion import (
    DispersionQuery,
    DispersionResult,
    SeriesCoefficients,
    buermann_coefficients,
    g_diag,
    k_crit,
    lambda_series,
    lambda_star,
    solve_x_star,
)
from .operators import (
    SlowEigenvector,
    TruncatedOperator,
    build_t1_truncated,
    build_truncated,
    eigenvector_generating,
    eigenvector_recurrence,
    ritz_values,
    slow_eigenvalue_truncated,
)
from .ce import CEMultiplier, MomentMatrix, build_moment_matrix, ce_recursion, equilibrium_moment
from .evolution import (
    AttractionRow,
    EvolveConfig,
    FieldTrajectory,
    MomentState,
    MomentTrajectory,
    SpectralField,
    attraction_report,
    ce_evolve,
    closure_evolve,
    hermite_project,
    kinetic_evolve,
)
from .specfun import EvalResult, dawson, erf, erfcx, faddeeva_w

__all__ = [
    "__version__",
    "DispersionQuery",
    "DispersionResult",
    "SeriesCoefficients",
    "buermann_coefficients",
    "g_diag",
    "k_crit",
    "lambda_series",
    "lambda_star",
    "solve_x_star",
    "SlowEigenvector",
    "TruncatedOperator",
    "build_t1_truncated",
    "build_truncated",
    "eigenvector_generating",
    "eigenvector_recurrence",
    "ritz_values",
    "slow_eigenvalue_truncated",
    "CEMultiplier",
    "MomentMatrix",
    "build_moment_matrix",
    "ce_recursion",
    "equilibrium_moment",
    "AttractionRow",
    "EvolveConfig",
    "FieldTrajectory",
    "MomentState",
    "MomentTrajectory",
    "SpectralField",
    "attraction_report",
    "ce_evolve",
    "closure_evolve",
    "hermite_project",
    "kinetic_evolve",
    "EvalResult",
    "dawson",
    "erf",
    "erfcx",
    "faddeeva_w",
]
