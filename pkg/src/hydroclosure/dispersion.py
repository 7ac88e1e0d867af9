"""Slow eigenvalue of the kinetic operator from the transcendental dispersion relation.

For 0 < |k| < k_crit = sqrt(pi/2)/tau the operator has a single isolated real
eigenvalue

    lambda*(k, tau) = -1/tau + sqrt(2) k x*(k tau),

where x* solves sqrt(pi/2) e^{x^2} (sign x - erf x) = k tau, equivalently
erfcx(x*) = k tau sqrt(2/pi) on the positive branch.  This module solves that
equation, exposes the diagonal Green's function whose level set defines the
discrete spectrum, the critical wave number, the closed-form small-tau series
truncations, and the Lagrange-Buermann coefficients of the series inversion.

All operations are pure; batch sweeps over (k, tau) may run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .errors import (
    ConditioningError,
    ConvergenceError,
    DegenerateWaveNumberError,
    DomainError,
    NoDiscreteSpectrumError,
)
from .specfun import erfcx, erfcx_derivative, erfcx_inverse_bracket, faddeeva_w

__all__ = [
    "DispersionQuery",
    "DispersionResult",
    "SeriesCoefficients",
    "g_diag",
    "k_crit",
    "solve_x_star",
    "lambda_star",
    "lambda_series",
    "buermann_coefficients",
]

_SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)
_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class DispersionQuery:
    """One (wave number, relaxation time) point of the dispersion relation."""

    k: float
    tau: float

    def __post_init__(self):
        if not math.isfinite(self.k):
            raise DomainError(f"k must be finite, got {self.k!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise DomainError(f"tau must be positive and finite, got {self.tau!r}")


@dataclass(frozen=True)
class DispersionResult:
    """Slow branch of the spectrum at one query point.

    x_star carries the sign of k; residual is the absolute defect of the
    transcendental equation at the returned root; eps is the dimensionless
    expansion parameter sqrt(2/pi) k tau.
    """

    x_star: float
    lambda_star: float
    eps: float
    residual: float
    in_range: bool


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients of the inverted dispersion series.

    y_star_coeffs[n-1] holds c_n of y*(eps) = sum c_n eps^n (even-order
    coefficients vanish by parity).  lambda_coeffs[j] holds the coefficient of
    k^{j+1} tau^j in the small-tau expansion of the slow eigenvalue; the
    leading entries are (0, -1, 0, +1, 0, -4, ...).
    """

    y_star_coeffs: list[float]
    lambda_coeffs: list[float]


def g_diag(z: complex) -> complex:
    """Diagonal Green's function g(z, 0) of the free-streaming Jacobi operator.

    g(z,0) = (i pi / sqrt(2 pi)) e^{-z^2/2} [sign(Im z) - erf(-i z / sqrt(2))],
    evaluated via the Faddeeva function.  Purely imaginary on the imaginary
    axis; real z lies on the essential spectrum and is rejected.
    """
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError(f"g_diag: z={z!r} lies on the essential spectrum (real axis)")
    s = 1.0 if z.imag > 0.0 else -1.0
    return 1j * _SQRT_PI_OVER_2 * s * faddeeva_w(s * z / _SQRT2)


def k_crit(tau: float) -> float:
    """Critical wave number sqrt(pi/2)/tau beyond which the slow mode merges
    into the essential spectrum."""
    if not (math.isfinite(tau) and tau > 0.0):
        raise DomainError(f"k_crit: tau must be positive and finite, got {tau!r}")
    return _SQRT_PI_OVER_2 / tau


def solve_x_star(s: float, rtol: float = 1e-12) -> float:
    """Root x* of sqrt(pi/2) e^{x^2} (sign x - erf x) = s for 0 < |s| < sqrt(pi/2).

    On the positive branch this is erfcx(x*) = s sqrt(2/pi) with x* > 0,
    solved by a bracketed Newton iteration; the bracket comes from the
    two-sided rational bounds on erfcx, so the iteration cannot escape.
    Odd in s by construction.
    """
    if not math.isfinite(s):
        raise DomainError(f"solve_x_star: s must be finite, got {s!r}")
    if s == 0.0:
        raise DegenerateWaveNumberError()
    if abs(s) >= _SQRT_PI_OVER_2:
        raise NoDiscreteSpectrumError(k=s, tau=None, k_crit=_SQRT_PI_OVER_2)

    c = abs(s) * _SQRT_2_OVER_PI  # target erfcx value, in (0, 1)
    lo, hi = erfcx_inverse_bracket(c)
    # erfcx is strictly decreasing: f(lo) >= 0 >= f(hi)
    x = 0.5 * (lo + hi)
    tol = 0.5 * rtol * max(1.0, c)
    fx = erfcx(x) - c
    for _ in range(100):
        if abs(fx) <= tol:
            break
        if fx > 0.0:
            lo = x
        else:
            hi = x
        step = fx / erfcx_derivative(x, fx + c)
        x_new = x - step
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x:  # interval exhausted at float resolution
            break
        x = x_new
        fx = erfcx(x) - c
    if abs(fx) > rtol * max(1.0, c):
        raise ConvergenceError("solve_x_star: Newton/bisection did not converge", abs(fx))
    return math.copysign(x, s)


def _point_eq_residual(x: float, s: float) -> float:
    """|sqrt(pi/2) sign(x) erfcx(|x|) - s|, the defect of the dispersion equation."""
    return abs(_SQRT_PI_OVER_2 * math.copysign(erfcx(abs(x)), x) - s)


def lambda_star(q: DispersionQuery) -> DispersionResult:
    """Isolated slow eigenvalue lambda* = -1/tau + sqrt(2) k x*(k tau).

    Real, strictly inside (-1/tau, 0), and even in k.  Raises
    :class:`DegenerateWaveNumberError` at k = 0 (pure point spectrum
    {0, -1/tau}) and :class:`NoDiscreteSpectrumError` for |k| >= k_crit.
    """
    kc = k_crit(q.tau)
    if q.k == 0.0:
        raise DegenerateWaveNumberError(q.tau)
    if abs(q.k) >= kc:
        raise NoDiscreteSpectrumError(q.k, q.tau, kc)
    s = q.k * q.tau
    x = solve_x_star(s)
    lam = -1.0 / q.tau + _SQRT2 * q.k * x
    return DispersionResult(
        x_star=x,
        lambda_star=lam,
        eps=_SQRT_2_OVER_PI * s,
        residual=_point_eq_residual(x, s),
        in_range=True,
    )


def lambda_series(q: DispersionQuery, order: int) -> float:
    """Small-tau truncation of the slow eigenvalue.

    order 1: -k^2 tau;  order 3: adds +k^4 tau^3;  order 5: adds -4 k^6 tau^5.
    These are the local (Chapman-Enskog) dispersion multipliers.
    """
    if order not in (1, 3, 5):
        raise DomainError(f"lambda_series: order must be 1, 3 or 5, got {order!r}")
    k, tau = q.k, q.tau
    val = -(k**2) * tau
    if order >= 3:
        val += k**4 * tau**3
    if order >= 5:
        val -= 4.0 * k**6 * tau**5
    return val


# --- Lagrange-Buermann inversion -------------------------------------------

def _psi_pow(y: mp.mpf, n: int) -> mp.mpf:
    """(y / phi(y))^n with phi(y) = sign(y) erfcx(1/|y|); even in y, -> pi^{n/2} at 0."""
    ay = abs(y)
    x = 1 / ay
    phi = mp.exp(x * x) * mp.erfc(x)
    return (ay / phi) ** n


def _derivative_at_zero(n: int, order: int, h0: str, levels: int) -> tuple[mp.mpf, mp.mpf]:
    """order-th derivative (order even, possibly 0) of (y/phi)^n at y = 0.

    Central finite differences with Richardson extrapolation in h^2.  The
    function's Taylor series at 0 is divergent (Gevrey-1), so plain double
    precision cannot balance truncation against rounding at the accuracy the
    series invariants require; the evaluations therefore run at elevated
    mpmath precision where Richardson converges long before the divergent
    tail of the h^2 error expansion takes over.
    """
    centre = mp.sqrt(mp.pi) ** n
    rows = []
    for level in range(levels):
        h = mp.mpf(h0) / 2**level
        if order == 0:
            rows.append(_psi_pow(h, n))
            continue
        acc = mp.mpf(0)
        half = order // 2
        for i in range(order + 1):
            j = half - i
            w = (-1) ** i * mp.binomial(order, i)
            acc += w * (centre if j == 0 else _psi_pow(abs(j) * h, n))
        rows.append(acc / h**order)
    table = [rows]
    for m in range(1, levels):
        prev = table[-1]
        fac = mp.mpf(4) ** m
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
    best = table[-1][0]
    est = abs(table[-1][0] - table[-2][0])
    return best, est


def buermann_coefficients(n_max: int) -> SeriesCoefficients:
    """Coefficients c_n = (1/n!) d^{n-1}/dy^{n-1}|_0 (y/phi(y))^n of the
    inverted dispersion series, plus the derived small-tau eigenvalue series.

    c_1 = sqrt(pi); even-order coefficients vanish by parity and are returned
    as exact zeros.  n_max is capped at 12: beyond that the numerical
    differentiation of the divergent-series function is not trustworthy.
    """
    if not 1 <= n_max:
        raise DomainError(f"buermann_coefficients: n_max must be >= 1, got {n_max!r}")
    if n_max > 12:
        raise ConditioningError(
            f"buermann_coefficients: n_max={n_max} exceeds the conditioning limit 12"
        )
    coeffs: list[float] = []
    for n in range(1, n_max + 1):
        if n % 2 == 0:
            coeffs.append(0.0)  # (y/phi)^n is even, odd derivatives vanish
            continue
        order = n - 1
        with mp.workdps(50 + 6 * order):
            deriv, est = _derivative_at_zero(n, order, "0.02", 11)
            cn = deriv / mp.factorial(n)
            est_cn = est / mp.factorial(n)
            if est_cn > mp.mpf("1e-20") * max(1, abs(cn)):
                raise ConditioningError(
                    f"buermann_coefficients: c_{n} did not stabilise "
                    f"(Richardson spread {mp.nstr(est_cn, 3)})"
                )
            coeffs.append(float(cn))

    # lambda* = sqrt(2) k [1/y*(eps) - 1/(sqrt(pi) eps)]: invert the series and
    # map eps^j -> (2/pi)^{j/2} k^j tau^j.
    recip = [0.0] * n_max
    recip[0] = 1.0 / coeffs[0]
    for m in range(1, n_max):
        recip[m] = -sum(coeffs[i] * recip[m - i] for i in range(1, m + 1)) / coeffs[0]
    lam = [
        _SQRT2 * _SQRT_2_OVER_PI**j * recip[j + 1]
        for j in range(n_max - 1)
    ]
    return SeriesCoefficients(y_star_coeffs=coeffs, lambda_coeffs=lam)
