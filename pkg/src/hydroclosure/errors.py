"""Exception types shared across the package.

The CLI maps these onto exit codes: validation-type errors (DomainError and
subclasses, ConfigError) exit with 2, numeric/convergence failures
(ConvergenceError, ConditioningError, AccuracyError) exit with 3.
"""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OverflowRangeError(DomainError):
    """The requested value is finite but not representable in double precision."""


class NoDiscreteSpectrumError(DomainError):
    """No isolated slow eigenvalue exists: |k| >= k_crit(tau).

    Carries the critical wave number so callers can clip sweeps.
    """

    def __init__(self, k: float, tau: float | None, k_crit: float):
        self.k = k
        self.tau = tau
        self.k_crit = k_crit
        at_tau = "" if tau is None else f" at tau={tau:g}"
        super().__init__(
            f"no discrete eigenvalue for |k|={abs(k):g} >= k_crit={k_crit:.6g}{at_tau}"
        )


class DegenerateWaveNumberError(DomainError):
    """k = 0 is a distinguished degenerate case, not a root-find.

    The spectrum at k = 0 is the pure point set {0, -1/tau}.
    """

    def __init__(self, tau: float | None = None):
        self.tau = tau
        spectrum = "{0, -1/tau}" if tau is None else f"{{0, {-1.0 / tau:g}}}"
        super().__init__(
            f"k = 0 is degenerate: spectrum is the point set {spectrum}, "
            "no transcendental root exists"
        )


class ConvergenceError(RuntimeError):
    """An iteration failed to converge; carries the last residual."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message if residual is None else f"{message} (last residual {residual:.3e})")


class ConditioningError(RuntimeError):
    """A numerically differentiated quantity cannot be resolved at the requested order."""


class AccuracyError(RuntimeError):
    """A quadrature or series result fails its internal accuracy check."""


class ConfigError(ValueError):
    """Invalid run configuration (bad flag value, stability bound violated, ...)."""


class ResourceLimitError(RuntimeError):
    """The request exceeds a documented size cap (exact-arithmetic order, ...)."""
