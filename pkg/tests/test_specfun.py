"""Special-function certification against extended-precision oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydroclosure import specfun
from hydroclosure.errors import DomainError, OverflowRangeError

import oracles


def _close(value, reference, rtol):
    ref = float(reference)
    assert abs(value - ref) <= rtol * max(1.0, abs(ref)), (value, ref)


class TestErf:
    def test_zero(self):
        assert specfun.erf(0.0) == 0.0

    def test_one_against_maclaurin_oracle(self):
        expected = oracles.erf_maclaurin(1.0, terms=60)
        assert abs(float(expected) - 0.8427007929497149) < 1e-15
        _close(specfun.erf(1.0), expected, 1e-15)

    def test_minus_one_oddness(self):
        assert specfun.erf(-1.0) == -specfun.erf(1.0)
        _close(specfun.erf(-1.0), -0.8427007929497149, 1e-15)

    def test_bounds_and_monotonicity(self):
        # strict bound and monotonicity hold wherever doubles can represent the
        # gap to 1; beyond |x| ~ 5.9 the value rounds to unity
        xs = np.linspace(-5.5, 5.5, 101)
        vals = [specfun.erf(float(x)) for x in xs]
        assert all(abs(v) < 1.0 for v in vals)
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert specfun.erf(30.0) <= 1.0

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            specfun.erf(float("nan"))
        with pytest.raises(DomainError):
            specfun.erf(float("inf"))


class TestErfcx:
    def test_zero(self):
        assert specfun.erfcx(0.0) == 1.0

    def test_one_against_series_oracle(self):
        expected = oracles.erfcx_via_series(1.0, terms=80)
        assert abs(float(expected) - 0.42758357615580700) < 1e-15
        _close(specfun.erfcx(1.0), expected, 1e-14)

    def test_twenty_against_continued_fraction(self):
        expected = oracles.erfcx_laplace_cf(20.0, convergents=50)
        assert str(float(expected)).startswith("0.02817434874")
        _close(specfun.erfcx(20.0), expected, 1e-14)

    def test_reflection(self):
        x = -1.5
        direct = specfun.erfcx(x)
        assert direct == pytest.approx(2.0 * math.exp(x * x) - specfun.erfcx(-x), rel=1e-15)

    def test_reflection_overflow_guard(self):
        with pytest.raises(OverflowRangeError):
            specfun.erfcx(-27.0)

    def test_strictly_decreasing(self):
        xs = np.linspace(0.0, 30.0, 400)
        vals = [specfun.erfcx(float(x)) for x in xs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_consistency_triplet(self):
        # erfcx(x) == exp(x^2)(1 - erf(x)) wherever the right side is representable;
        # the right side is evaluated in mpmath at precision scaled to the x^2-digit
        # cancellation (the series oracle covers the spot checks above)
        for x in np.geomspace(1e-3, 26.0, 60):
            lhs = specfun.erfcx(float(x))
            with mp.workdps(40 + int(0.44 * x * x)):
                rhs = float(mp.exp(mp.mpf(x) ** 2) * (1 - mp.erf(mp.mpf(x))))
            assert abs(lhs - rhs) <= 1e-13 * lhs


class TestDawson:
    def test_zero(self):
        assert specfun.dawson(0.0) == 0.0

    def test_one_against_maclaurin_oracle(self):
        expected = oracles.dawson_maclaurin(1.0, terms=60)
        assert abs(float(expected) - 0.5380795069127684) < 1e-15
        _close(specfun.dawson(1.0), expected, 1e-14)

    def test_ten_against_asymptotic_oracle(self):
        expected, bound = oracles.dawson_asymptotic(10.0, terms=12)
        assert float(bound) < 1e-17  # remainder far below the comparison tolerance
        assert abs(float(expected) - 0.05025384718759852) < 1e-15
        _close(specfun.dawson(10.0), expected, 1e-14)

    def test_large_x_limit(self):
        assert specfun.dawson(50.0) == pytest.approx(1.0 / 100.0, rel=1e-3)

    def test_imaginary_axis(self):
        val = specfun.dawson(1.5j)
        ref = oracles.dawson_ref(1.5j)
        assert val.real == 0.0
        assert abs(val.imag - float(ref.imag)) <= 1e-13 * abs(float(ref.imag))

    def test_imaginary_oddness(self):
        assert specfun.dawson(-0.8j) == -specfun.dawson(0.8j)

    def test_imaginary_overflow(self):
        with pytest.raises(OverflowRangeError):
            specfun.dawson(30.0j)

    def test_general_complex_rejected(self):
        with pytest.raises(DomainError):
            specfun.dawson(1.0 + 1.0j)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            specfun.dawson(float("nan"))


class TestFaddeeva:
    def test_zero(self):
        assert specfun.faddeeva_w(0.0 + 0.0j) == 1.0 + 0.0j

    def test_at_i_equals_erfcx_one(self):
        val = specfun.faddeeva_w(1j)
        assert abs(val.imag) < 1e-16
        _close(val.real, 0.42758357615580700, 1e-14)

    def test_functional_identity_at_1_plus_i(self):
        z = 1.0 + 1.0j
        lhs = specfun.faddeeva_w(-z)
        rhs = 2.0 * np.exp(-z * z) - specfun.faddeeva_w(z)
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))

    def test_upper_half_plane_integral_form(self):
        # for Im z > 0, w(z) = (i/pi) int exp(-s^2)/(z-s) ds; compare via mpmath quad
        z = 0.7 + 0.9j
        with mp.workdps(30):
            quad = 1j / mp.pi * mp.quad(
                lambda s: mp.exp(-s * s) / (mp.mpc(z) - s), [-mp.inf, mp.inf]
            )
        val = specfun.faddeeva_w(z)
        assert abs(val - complex(quad)) < 1e-12

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            specfun.faddeeva_w(complex("nan"))


class TestEvalResults:
    def test_error_bound_invariant_and_truth(self):
        for x in np.geomspace(1e-3, 20.0, 30):
            r = specfun.erfcx_eval(float(x))
            assert r.est_abs_error <= 1e-13 * max(1.0, abs(r.value))
            with mp.workdps(40 + int(0.44 * x * x)):
                truth = float(mp.exp(mp.mpf(x) ** 2) * mp.erfc(mp.mpf(x)))
            assert abs(r.value - truth) <= max(r.est_abs_error, 1e-15)

    def test_dawson_link_bound(self):
        for x in np.linspace(-4.0, 4.0, 17):
            r = specfun.dawson_eval(float(x))
            assert r.est_abs_error <= 1e-13 * max(1.0, abs(r.value))

    def test_faddeeva_bound(self):
        r = specfun.faddeeva_w_eval(2.0 - 0.5j)
        assert r.est_abs_error <= 1e-13 * max(1.0, abs(r.value))
        assert abs(r.value - complex(oracles.faddeeva_ref(2.0 - 0.5j))) <= r.est_abs_error


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-5.5, max_value=5.5, allow_nan=False))
def test_oddness_properties(x):
    assert abs(specfun.erf(-x) + specfun.erf(x)) <= 1e-14
    assert abs(specfun.dawson(-x) + specfun.dawson(x)) <= 1e-14


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-4.0, max_value=4.0), st.floats(min_value=-4.0, max_value=4.0))
def test_faddeeva_dawson_link(a, b):
    # w(x) = exp(-x^2) + (2i/sqrt(pi)) D(x) on the real axis
    x = a  # b reserved for the complex identity below
    lhs = specfun.faddeeva_w(complex(x, 0.0))
    rhs = math.exp(-x * x) + 2j / math.sqrt(math.pi) * specfun.dawson(x)
    assert abs(lhs.real - rhs.real) <= 1e-13 * max(1.0, abs(rhs.real))
    assert abs(lhs.imag - rhs.imag) <= 1e-13 * max(1.0, abs(rhs.imag))
    z = complex(a, b)
    wm, wp = specfun.faddeeva_w(-z), specfun.faddeeva_w(z)
    gauss = 2.0 * np.exp(-z * z)
    # tolerance scales with the largest participating term: the identity
    # subtracts quantities of size e^{|z|^2} in parts of the plane
    scale = max(1.0, abs(wm), abs(wp), abs(gauss))
    assert abs(wm - (gauss - wp)) <= 1e-13 * scale
