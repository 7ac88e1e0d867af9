"""Extended-precision reference implementations for the test suite.

These oracles are deliberately independent of the shipped library: series and
continued fractions evaluated with mpmath at elevated precision, exact
rational series arithmetic with Fraction, and direct high-precision root
finding.  They exist to compute expected values, which the tests then freeze
and compare against the package.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

DPS = 50


def erf_maclaurin(x: float, terms: int = 60) -> mp.mpf:
    """erf by its Maclaurin series: (2/sqrt(pi)) sum (-1)^n x^(2n+1)/(n! (2n+1)).

    The terms peak near exp(x^2) while the result 1 - erf(x) downstream is
    ~ exp(-x^2), so erfcx evaluation through this series cancels about
    2 x^2 log10(e) digits; the working precision scales accordingly and the
    term count runs until the terms are negligible at that precision.
    """
    dps = DPS + int(0.9 * x * x) + 8
    with mp.workdps(dps):
        xx = mp.mpf(x)
        acc = mp.mpf(0)
        term = xx  # x^{2n+1}/n!
        cutoff = mp.mpf(10) ** (-dps - 5)
        n = 0
        while n < max(terms, 5000):
            acc += term / (2 * n + 1)
            term *= -xx * xx / (n + 1)
            n += 1
            if n >= terms and abs(term) < cutoff * max(1, abs(acc)):
                break
        return acc * 2 / mp.sqrt(mp.pi)


def erfcx_via_series(x: float, terms: int = 80) -> mp.mpf:
    """erfcx(x) = exp(x^2) (1 - erf(x)) with erf from the Maclaurin oracle."""
    dps = DPS + int(0.9 * x * x) + 8
    with mp.workdps(dps):
        return mp.exp(mp.mpf(x) ** 2) * (1 - erf_maclaurin(x, terms))


def erfcx_laplace_cf(x: float, convergents: int = 50) -> mp.mpf:
    """erfcx by the Laplace continued fraction, valid for large x > 0:

    sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...))))).
    Evaluated bottom-up with ``convergents`` levels.
    """
    with mp.workdps(DPS):
        xx = mp.mpf(x)
        tail = mp.mpf(0)
        for m in range(convergents, 0, -1):
            tail = (mp.mpf(m) / 2) / (xx + tail)
        return 1 / (mp.sqrt(mp.pi) * (xx + tail))


def dawson_maclaurin(x: float, terms: int = 60) -> mp.mpf:
    """Dawson by its Maclaurin series: sum (-1)^n (2 x^2)^n x / (2n+1)!!."""
    with mp.workdps(DPS):
        xx = mp.mpf(x)
        acc = mp.mpf(0)
        term = xx
        for n in range(terms):
            acc += term
            term *= -2 * xx * xx / (2 * n + 3)
        return acc


def dawson_asymptotic(x: float, terms: int = 12) -> tuple[mp.mpf, mp.mpf]:
    """Dawson large-x asymptotic sum_{n} (2n-1)!!/(2^(n+1) x^(2n+1)).

    Returns (value, bound) where bound is the magnitude of the first omitted
    term; for an alternating-free asymptotic series in this regime the
    truncation error is below the first omitted term once terms decrease.
    """
    with mp.workdps(DPS):
        xx = mp.mpf(x)
        acc = mp.mpf(0)
        term = 1 / (2 * xx)
        for n in range(terms):
            acc += term
            term *= mp.mpf(2 * n + 1) / (2 * xx * xx)
        return acc, abs(term)


def faddeeva_ref(z: complex) -> mp.mpc:
    """w(z) = exp(-z^2)(1 - erf(-i z)) straight from the definition in mpmath."""
    with mp.workdps(DPS):
        zz = mp.mpc(z)
        return mp.exp(-zz * zz) * (1 - mp.erf(-1j * zz))


def dawson_ref(z: complex | float) -> mp.mpc:
    """Dawson via erfi at high precision (valid on the whole plane)."""
    with mp.workdps(DPS):
        zz = mp.mpc(z)
        return mp.exp(-zz * zz) * mp.sqrt(mp.pi) / 2 * mp.erfi(zz)


def x_star_ref(s: float) -> mp.mpf:
    """High-precision root of sqrt(pi/2) erfcx(x) = s on the positive branch."""
    with mp.workdps(DPS):
        c = mp.mpf(s) * mp.sqrt(2 / mp.pi)
        guess = 1 / (c * mp.sqrt(mp.pi)) if c < mp.mpf("0.5") else mp.mpf("0.5")
        return mp.findroot(lambda t: mp.exp(t * t) * mp.erfc(t) - c, guess)


def x_star_bisection(s: float, lo: float, hi: float, iters: int = 200) -> mp.mpf:
    """Plain bisection on the dispersion equation over a supplied bracket."""
    with mp.workdps(DPS):
        c = mp.mpf(s) * mp.sqrt(2 / mp.pi)
        f = lambda t: mp.exp(t * t) * mp.erfc(t) - c
        a, b = mp.mpf(lo), mp.mpf(hi)
        fa = f(a)
        for _ in range(iters):
            m = (a + b) / 2
            fm = f(m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        return (a + b) / 2


def lambda_star_ref(k: float, tau: float) -> mp.mpf:
    with mp.workdps(DPS):
        x = x_star_ref(abs(k) * tau)
        lam = -1 / mp.mpf(tau) + mp.sqrt(2) * abs(mp.mpf(k)) * x
        return lam


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _series_mul(a: list[Fraction], b: list[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, ai in enumerate(a[:n]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: n - i]):
            out[i + j] += ai * bj
    return out


def _series_inv(a: list[Fraction], n: int) -> list[Fraction]:
    inv = [Fraction(0)] * n
    inv[0] = 1 / a[0]
    for m in range(1, n):
        inv[m] = -sum(a[i] * inv[m - i] for i in range(1, m + 1)) / a[0]
    return inv


def buermann_exact(n_max: int) -> list[mp.mpf]:
    """Inversion coefficients from the exact erfcx asymptotic series.

    phi(y) = (y/sqrt(pi)) S(y^2) with S(u) = sum_m (-1)^m (2m-1)!! (u/2)^m as
    exact rationals, so psi = y/phi = sqrt(pi)/S and
    c_n = (1/n) [y^(n-1)] psi^n = pi^(n/2) (1/n) [u^((n-1)/2)] (1/S)^n.
    Entirely independent of the package's finite-difference route.
    """
    m_len = n_max // 2 + 2
    S = [Fraction((-1) ** m * _double_factorial(2 * m - 1), 2**m) for m in range(m_len)]
    inv_s = _series_inv(S, m_len)
    out = []
    with mp.workdps(DPS):
        power = inv_s  # (1/S)^n
        for n in range(1, n_max + 1):
            if n % 2 == 0:
                out.append(mp.mpf(0))
            else:
                idx = (n - 1) // 2
                frac = power[idx] / n
                out.append(mp.power(mp.pi, mp.mpf(n) / 2) * mp.mpf(frac.numerator) / frac.denominator)
            if n < n_max:
                power = _series_mul(power, inv_s, m_len)
        return out


def lambda_coeffs_exact(n_max: int) -> list[mp.mpf]:
    """Exact tau-series coefficients of the slow eigenvalue via the same route:
    a_j = sqrt(2) (2/pi)^(j/2) [eps^j] (1/y*(eps) - 1/(sqrt(pi) eps))."""
    m_len = n_max // 2 + 2
    S = [Fraction((-1) ** m * _double_factorial(2 * m - 1), 2**m) for m in range(m_len)]
    # y* = sqrt(pi) eps / S_hat(eps^2) where S_hat has the same coefficients as
    # 1/(y/phi) evaluated at the inverse series ... simpler: invert numerically
    # from the exact c series at high precision.
    cs = buermann_exact(n_max)
    with mp.workdps(DPS):
        recip = [mp.mpf(0)] * n_max
        recip[0] = 1 / cs[0]
        for m in range(1, n_max):
            recip[m] = -sum(cs[i] * recip[m - i] for i in range(1, m + 1)) / cs[0]
        return [
            mp.sqrt(2) * mp.power(2 / mp.pi, mp.mpf(j) / 2) * recip[j + 1]
            for j in range(n_max - 1)
        ]
