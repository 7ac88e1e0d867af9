"""Real and complex special functions used throughout the package.

erf, erfcx, Dawson's function and the Faddeeva function w(z) anchor the
dispersion solver (root of the transcendental equation), the diagonal
Green's function, and the closed-form slow eigenvector.  The heavy lifting
is delegated to scipy.special (certified few-ulp kernels); this module adds
the domain handling the rest of the package relies on -- the reflection
formula with overflow guard for erfcx at negative arguments, Dawson on the
imaginary axis, and per-call error bounds.

Every ``*_eval`` variant returns an :class:`EvalResult` carrying a certified
absolute error bound; the bare-named functions return the value alone.
All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import DomainError, OverflowRangeError

__all__ = [
    "EvalResult",
    "erf",
    "erf_eval",
    "erfcx",
    "erfcx_eval",
    "dawson",
    "dawson_eval",
    "faddeeva_w",
    "faddeeva_w_eval",
]

_EPS = 2.220446049250313e-16
# exp(x) overflows double precision beyond this exponent
_EXP_ARG_MAX = 709.78


@dataclass(frozen=True)
class EvalResult:
    """A function value together with an upper bound on its evaluation error.

    ``est_abs_error <= 1e-13 * max(1, |value|)`` holds over the declared
    argument ranges of every operation in this module.
    """

    value: float | complex
    est_abs_error: float


def _require_finite(x, name: str) -> None:
    if isinstance(x, complex):
        ok = math.isfinite(x.real) and math.isfinite(x.imag)
    else:
        ok = math.isfinite(x)
    if not ok:
        raise DomainError(f"{name}: argument must be finite, got {x!r}")


def erf_eval(x: float) -> EvalResult:
    """Error function erf(x) = (2/sqrt(pi)) * int_0^x exp(-s^2) ds."""
    x = float(x)
    _require_finite(x, "erf")
    v = float(_sp.erf(x))
    return EvalResult(v, 4.0 * _EPS * max(1.0, abs(v)))


def erf(x: float) -> float:
    return erf_eval(x).value


def erfcx_eval(x: float) -> EvalResult:
    """Scaled complementary error function erfcx(x) = exp(x^2) * (1 - erf(x)).

    Arguments x >= 0 are served directly.  Negative arguments use the
    reflection erfcx(-x) = 2 exp(x^2) - erfcx(x); the reflected value
    overflows for x < -26.64 and raises :class:`OverflowRangeError`.
    """
    x = float(x)
    _require_finite(x, "erfcx")
    if x >= 0.0:
        v = float(_sp.erfcx(x))
        return EvalResult(v, 4.0 * _EPS * max(1.0, v))
    xsq = x * x
    if xsq > _EXP_ARG_MAX:
        raise OverflowRangeError(
            f"erfcx({x:g}): reflection 2*exp(x^2) - erfcx(-x) overflows double precision"
        )
    v = 2.0 * math.exp(xsq) - float(_sp.erfcx(-x))
    # exp(x^2) dominates; its relative error is driven by rounding of x*x
    rel = (xsq + 4.0) * _EPS
    return EvalResult(v, rel * max(1.0, abs(v)))


def erfcx(x: float) -> float:
    return erfcx_eval(x).value


def _dawson_imag(a: float) -> EvalResult:
    """Dawson on the imaginary axis: D(i a) = i * (sqrt(pi)/2) * exp(a^2) * erf(a).

    Grows like exp(a^2); raises on arguments whose value overflows.
    """
    asq = a * a
    if asq > _EXP_ARG_MAX:
        raise OverflowRangeError(
            f"dawson({a:g}j): value ~ exp(a^2) overflows double precision"
        )
    mag = 0.5 * math.sqrt(math.pi) * math.exp(asq) * float(_sp.erf(a))
    v = complex(0.0, mag)
    rel = (asq + 5.0) * _EPS
    return EvalResult(v, rel * max(1.0, abs(mag)))


def dawson_eval(x: float | complex) -> EvalResult:
    """Dawson's function D(x) = exp(-x^2) * int_0^x exp(y^2) dy.

    Accepts real arguments, and purely imaginary complex arguments as needed
    by the slow-eigenvector generating function.  Other complex arguments are
    rejected.
    """
    if isinstance(x, complex):
        _require_finite(x, "dawson")
        if x.imag == 0.0:
            r = dawson_eval(x.real)
            return EvalResult(complex(r.value, 0.0), r.est_abs_error)
        if x.real != 0.0:
            raise DomainError(
                f"dawson: complex argument must be purely imaginary, got {x!r}"
            )
        return _dawson_imag(x.imag)
    x = float(x)
    _require_finite(x, "dawson")
    v = float(_sp.dawsn(x))
    return EvalResult(v, 4.0 * _EPS * max(1.0, abs(v)))


def dawson(x: float | complex) -> float | complex:
    return dawson_eval(x).value


def faddeeva_w_eval(z: complex) -> EvalResult:
    """Faddeeva function w(z) = exp(-z^2) * (1 - erf(-i z)).

    Satisfies w(-z) = 2 exp(-z^2) - w(z); for Im z > 0 it equals
    (i/pi) * int exp(-s^2) / (z - s) ds.
    """
    z = complex(z)
    _require_finite(z, "faddeeva_w")
    v = complex(_sp.wofz(z))
    return EvalResult(v, 5.0e-14 * max(1.0, abs(v)))


def faddeeva_w(z: complex) -> complex:
    return faddeeva_w_eval(z).value


def erfcx_inverse_bracket(c: float) -> tuple[float, float]:
    """Bracket for the root of erfcx(x) = c, c in (0, 1), x > 0.

    Uses the two-sided bound
    2/(sqrt(pi)(x + sqrt(x^2 + 2))) < erfcx(x) <= 2/(sqrt(pi)(x + sqrt(x^2 + 4/pi)))
    whose inverses give a tight enclosure of the root.
    """
    if not 0.0 < c < 1.0:
        raise DomainError(f"erfcx_inverse_bracket: need 0 < c < 1, got {c:g}")
    b = 2.0 / (c * math.sqrt(math.pi))
    lo = max((b * b - 2.0) / (2.0 * b), 0.0)
    hi = (b * b - 4.0 / math.pi) / (2.0 * b)
    return lo, hi


def erfcx_derivative(x: float, fx: float | None = None) -> float:
    """d/dx erfcx(x) = 2 x erfcx(x) - 2/sqrt(pi), reusing erfcx(x) when given."""
    if fx is None:
        fx = erfcx(x)
    return 2.0 * x * fx - 2.0 / math.sqrt(math.pi)


def gauss_hermite_prob(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature rule for plain integrals of Gaussian-decaying integrands.

    Rescaled from the physicists' Gauss-Hermite rule by v = sqrt(2) x, with
    exp(+x^2) absorbed into the weights, so that ``int h(v) dv ~= sum w_j
    h(v_j)`` for integrands h that decay like exp(-v^2/2).  Absorbing the
    exponential keeps the products finite: neither the tiny raw weights nor
    the huge exp factors ever appear separately in the caller.
    """
    if order < 1:
        raise DomainError(f"gauss_hermite_prob: order must be >= 1, got {order}")
    x, w = np.polynomial.hermite.hermgauss(order)
    if np.max(x * x) > _EXP_ARG_MAX:
        raise OverflowRangeError(f"gauss_hermite_prob: order {order} too large for double precision")
    nodes = math.sqrt(2.0) * x
    weights = math.sqrt(2.0) * w * np.exp(x * x)
    return nodes, weights
