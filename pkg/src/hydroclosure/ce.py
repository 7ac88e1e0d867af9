"""Chapman-Enskog machinery for the raw-moment system.

The raw moments M_l = int v^l f dv obey
d/dt M_l = -ik M_{l+1} - (1/tau)(M_l - M_l^eq) with Gaussian equilibrium
moments M_l^eq = (l-1)!! rho for even l.  Expanding the non-conserved moments
in powers of tau, M_n = sum_j m_{n,j} tau^j, and eliminating time derivatives
through the density equation d/dt rho = -ik M_1 turns the hierarchy into an
exact integer recursion.  Every m_{n,j} is an integer multiple of (ik)^j rho,
so the whole computation runs in exact arithmetic and the resulting local
dispersion multiplier (-k^2 tau + k^4 tau^3 - 4 k^6 tau^5 - ...) is produced
as exact rational coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimitError

__all__ = [
    "CEMultiplier",
    "MomentMatrix",
    "equilibrium_moment",
    "build_moment_matrix",
    "ce_recursion",
    "ce_moment_table",
]


def equilibrium_moment(l: int) -> int:
    """Gaussian equilibrium raw moment per unit density: (l-1)!! for even l,
    0 for odd l, with the convention (-1)!! = 1."""
    if l < 0:
        raise DomainError(f"equilibrium_moment: l must be >= 0, got {l}")
    if l % 2 == 1:
        return 0
    out = 1
    for m in range(1, l, 2):
        out *= m
    return out


@dataclass(frozen=True)
class MomentMatrix:
    """n x n truncation of the raw-moment evolution generator.

    Superdiagonal -ik (streaming), diagonal 0 in the conserved row and -1/tau
    elsewhere, and equilibrium injections (1/tau)(l-1)!! in the first column
    at even rows l >= 2.
    """

    n: int
    k: float
    tau: float
    rows: np.ndarray = field(repr=False)


def build_moment_matrix(k: float, tau: float, n: int) -> MomentMatrix:
    if n < 2:
        raise DomainError(f"build_moment_matrix: n must be >= 2, got {n}")
    if not (math.isfinite(tau) and tau > 0.0):
        raise DomainError(f"build_moment_matrix: tau must be positive, got {tau!r}")
    a = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    a[idx, idx + 1] = -1j * k
    a[np.arange(1, n), np.arange(1, n)] = -1.0 / tau
    for l in range(2, n, 2):
        a[l, 0] += equilibrium_moment(l) / tau
    return MomentMatrix(n=n, k=k, tau=tau, rows=a)


@dataclass(frozen=True)
class CEMultiplier:
    """Local dispersion multiplier from the Chapman-Enskog recursion.

    ``terms`` holds (tau_power, k_power, coeff) with exact rational coeff;
    evaluated at (k, tau) it gives the right-hand side factor of
    d/dt rho = (multiplier) rho.  Up to order 5 only odd tau powers with
    k_power = tau_power + 1 occur.  ``k_symbolic`` records that coefficients
    are stored jointly per power of k and tau rather than at numeric k.
    """

    terms: tuple[tuple[int, int, Fraction], ...]
    k_symbolic: bool = True

    def evaluate(self, k: float, tau: float) -> float:
        return float(sum(float(c) * k**kp * tau**tp for tp, kp, c in self.terms))

    def term_dict(self) -> dict[tuple[int, int], Fraction]:
        return {(tp, kp): c for tp, kp, c in self.terms}


def ce_moment_table(max_tau_order: int) -> dict[tuple[int, int], int]:
    """Integer coefficients gamma[(n, j)] with m_{n,j} = gamma * (ik)^j * rho.

    Seeds gamma[n, 0] = (n-1)!! for even n; the recursion
    gamma[n, j+1] = -gamma[n+1, j] + sum_{i+l=j} gamma[n, i] gamma[1, l]
    is the tau^j matching of the moment hierarchy after eliminating time
    derivatives through d/dt rho = -ik M_1 (each elimination of d/dt m_{n,i}
    feeds back the density multiplier lambda_l = -ik m_{1,l}).
    """
    if max_tau_order < 1:
        raise DomainError(f"ce_moment_table: max_tau_order must be >= 1, got {max_tau_order}")
    if max_tau_order > 7:
        raise ResourceLimitError(
            f"ce_moment_table: max_tau_order={max_tau_order} exceeds the exact-arithmetic "
            "budget (moment reach grows with order; capped at 7)"
        )
    j_max = max_tau_order
    gamma: dict[tuple[int, int], int] = {}
    n_reach = j_max + 2
    for n in range(1, n_reach + 1):
        gamma[(n, 0)] = equilibrium_moment(n)
    for j in range(0, j_max):
        for n in range(1, n_reach - j):
            acc = -gamma.get((n + 1, j), 0)
            for i in range(0, j + 1):
                acc += gamma.get((n, i), 0) * gamma.get((1, j - i), 0)
            gamma[(n, j + 1)] = acc
    return gamma


def ce_recursion(max_tau_order: int) -> CEMultiplier:
    """Exact CE multiplier through tau^max_tau_order.

    Each tau^j term is lambda_j = -ik m_{1,j} = -gamma[1,j] (ik)^{j+1}; odd j
    contributes the real coefficient -gamma[1,j] (-1)^{(j+1)/2} k^{j+1}, even
    j vanishes by parity.  Orders 1, 3, 5 come out as -1, +1, -4 times
    k^2 tau, k^4 tau^3, k^6 tau^5.
    """
    gamma = ce_moment_table(max_tau_order)
    terms: list[tuple[int, int, Fraction]] = []
    for j in range(1, max_tau_order + 1):
        g = gamma.get((1, j), 0)
        if g == 0:
            continue
        if j % 2 == 0:
            raise AssertionError(f"parity violation: nonzero even-order CE term at j={j}")
        coeff = Fraction(-g * (-1) ** ((j + 1) // 2))
        terms.append((j, j + 1, coeff))
    return CEMultiplier(terms=tuple(terms))
