"""Dispersion relation: root solve, Green's function, series machinery."""

import math
import time

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydroclosure import dispersion as disp
from hydroclosure.errors import (
    ConditioningError,
    DegenerateWaveNumberError,
    DomainError,
    NoDiscreteSpectrumError,
)
from hydroclosure.specfun import erfcx

import oracles

SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)


class TestGDiag:
    def test_purely_imaginary_axis_matches_real_equation(self):
        # at z = i sqrt(2) x the function reduces to sqrt(pi/2) e^{x^2}(sign - erf)
        for x in (0.3, 1.0, 2.5, -0.7, -1.9):
            z = 1j * math.sqrt(2.0) * x
            g = disp.g_diag(z)
            expected = SQRT_PI_OVER_2 * math.copysign(erfcx(abs(x)), x)
            assert abs(g.real) < 1e-15
            assert g.imag == pytest.approx(expected, rel=1e-13)

    def test_value_at_i(self):
        # frozen from composing the specfun oracles in the defining formula
        expected = float(SQRT_PI_OVER_2 * oracles.erfcx_via_series(1.0 / math.sqrt(2.0)))
        assert expected == pytest.approx(0.65568, abs=5e-6)
        g = disp.g_diag(1j)
        assert g == pytest.approx(1j * expected, rel=1e-13)

    def test_conjugate_symmetry(self):
        z = 0.3 + 0.7j
        assert disp.g_diag(np.conj(z)) == pytest.approx(np.conj(disp.g_diag(z)), rel=1e-14)

    def test_real_axis_rejected(self):
        with pytest.raises(DomainError):
            disp.g_diag(1.5 + 0.0j)


class TestKCrit:
    def test_paper_value_tau_0p1(self):
        assert disp.k_crit(0.1) == pytest.approx(12.5331, abs=1e-3)

    def test_exact_value_tau_1(self):
        assert disp.k_crit(1.0) == pytest.approx(1.2533141373155003, rel=1e-15)

    def test_scaling(self):
        tau = 0.4
        assert disp.k_crit(tau / 2.0) == pytest.approx(2.0 * disp.k_crit(tau), rel=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            disp.k_crit(0.0)
        with pytest.raises(DomainError):
            disp.k_crit(-1.0)


class TestSolveXStar:
    def test_forward_inverse_roundtrip(self):
        # s = sqrt(pi/2) erfcx(1) must invert back to x* = 1
        s = float(SQRT_PI_OVER_2 * oracles.erfcx_via_series(1.0))
        assert s == pytest.approx(0.535898, abs=1e-6)
        assert disp.solve_x_star(s) == pytest.approx(1.0, abs=1e-13)

    def test_root_approaches_zero_at_critical_s(self):
        xs = [disp.solve_x_star(SQRT_PI_OVER_2 * (1.0 - d)) for d in (1e-2, 1e-4, 1e-6)]
        assert xs[0] > xs[1] > xs[2] > 0.0
        assert xs[2] < 1e-5

    def test_small_s_against_bisection_oracle(self):
        s = 0.01
        # bracket from the large-x law erfcx(x) ~ 1/(x sqrt(pi))
        c = s * math.sqrt(2.0 / math.pi)
        lo = 1.0 / (math.sqrt(math.pi) * c) * 0.9
        hi = 1.0 / (math.sqrt(math.pi) * c) * 1.1
        ref = float(oracles.x_star_bisection(s, lo, hi))
        assert ref == pytest.approx(70.52, abs=0.01)
        x = disp.solve_x_star(s)
        assert x == pytest.approx(ref, rel=1e-12)
        assert abs(SQRT_PI_OVER_2 * erfcx(x) - s) <= 1e-12 * max(1.0, s)

    def test_oddness_exact(self):
        for s in (0.01, 0.3, 1.0):
            assert disp.solve_x_star(-s) == -disp.solve_x_star(s)

    def test_degenerate_and_out_of_range(self):
        with pytest.raises(DegenerateWaveNumberError):
            disp.solve_x_star(0.0)
        with pytest.raises(NoDiscreteSpectrumError):
            disp.solve_x_star(SQRT_PI_OVER_2)
        with pytest.raises(NoDiscreteSpectrumError):
            disp.solve_x_star(2.0)

    def test_residual_sweep_200_points(self):
        # dispersion residual <= 1e-12 max(1, s) over 200 log-spaced s, under 1 s
        s_values = np.geomspace(1e-4, SQRT_PI_OVER_2 * (1.0 - 1e-6), 200)
        t0 = time.perf_counter()
        for s in s_values:
            x = disp.solve_x_star(float(s))
            resid = abs(SQRT_PI_OVER_2 * erfcx(x) - s)
            assert resid <= 1e-12 * max(1.0, float(s))
        assert time.perf_counter() - t0 < 1.0


class TestLambdaStar:
    def test_small_tau_matches_series(self):
        r = disp.lambda_star(disp.DispersionQuery(1.0, 0.01))
        series3 = -0.01 + 1e-6
        assert r.lambda_star == pytest.approx(-0.009999, abs=1e-6)
        # the tau^5 correction is -4e-10 here, so order-3 agreement is ~1e-9
        assert abs(r.lambda_star - series3) < 1e-9

    def test_reference_value(self):
        ref = float(oracles.lambda_star_ref(5.0, 0.1))
        r = disp.lambda_star(disp.DispersionQuery(5.0, 0.1))
        assert r.lambda_star == pytest.approx(ref, rel=1e-13)
        assert r.in_range
        assert r.eps == pytest.approx(math.sqrt(2.0 / math.pi) * 0.5, rel=1e-15)

    def test_edge_limit(self):
        tau = 0.1
        kc = disp.k_crit(tau)
        k = kc * (1.0 - 1e-8)
        r = disp.lambda_star(disp.DispersionQuery(k, tau))
        gap = r.lambda_star + 1.0 / tau
        assert 0.0 < gap < 1e-6 / tau

    def test_evenness_bitwise(self):
        a = disp.lambda_star(disp.DispersionQuery(3.0, 0.1)).lambda_star
        b = disp.lambda_star(disp.DispersionQuery(-3.0, 0.1)).lambda_star
        assert a == b

    def test_confinement(self):
        for k in (0.5, 3.0, 7.0, 12.0):
            r = disp.lambda_star(disp.DispersionQuery(k, 0.1))
            assert -10.0 < r.lambda_star < 0.0

    def test_errors(self):
        with pytest.raises(DegenerateWaveNumberError):
            disp.lambda_star(disp.DispersionQuery(0.0, 0.1))
        with pytest.raises(NoDiscreteSpectrumError) as exc:
            disp.lambda_star(disp.DispersionQuery(20.0, 0.1))
        assert exc.value.k_crit == pytest.approx(12.5331, abs=1e-3)

    def test_series_consistency_bands(self):
        for k_tau, lo, hi in ((0.05, 0.98, 1.02), (0.01, 0.999, 1.001)):
            k, tau = 1.0, k_tau
            lam = disp.lambda_star(disp.DispersionQuery(k, tau)).lambda_star
            ratio = (lam + k**2 * tau) / (k**4 * tau**3)
            assert lo <= ratio <= hi


class TestLambdaSeries:
    def test_order1(self):
        assert disp.lambda_series(disp.DispersionQuery(2.0, 0.05), 1) == pytest.approx(-0.2, rel=1e-15)

    def test_order3(self):
        val = disp.lambda_series(disp.DispersionQuery(2.0, 0.05), 3)
        assert val == pytest.approx(-0.2 + 16.0 * 1.25e-4, rel=1e-14)

    def test_order5(self):
        val = disp.lambda_series(disp.DispersionQuery(1.0, 0.1), 5)
        assert val == pytest.approx(-0.1 + 0.001 - 4e-5, rel=1e-14)

    def test_bad_order(self):
        with pytest.raises(DomainError):
            disp.lambda_series(disp.DispersionQuery(1.0, 0.1), 2)


class TestBuermann:
    def test_leading_coefficients(self):
        sc = disp.buermann_coefficients(8)
        assert sc.y_star_coeffs[0] == pytest.approx(math.sqrt(math.pi), abs=1e-12)
        assert sc.y_star_coeffs[1] == 0.0
        assert sc.y_star_coeffs[2] == pytest.approx(math.pi**1.5 / 2.0, rel=1e-12)

    def test_against_exact_series_oracle(self):
        n_max = 12
        sc = disp.buermann_coefficients(n_max)
        exact = [float(v) for v in oracles.buermann_exact(n_max)]
        # spot-check the oracle itself against the closed forms
        assert exact[4] == 0.0  # c5 vanishes
        assert exact[6] == pytest.approx(3.0 * math.pi**3.5 / 8.0, rel=1e-14)
        assert exact[8] == pytest.approx(-1.25 * math.pi**4.5, rel=1e-14)
        for got, ref in zip(sc.y_star_coeffs, exact):
            assert got == pytest.approx(ref, rel=1e-11, abs=1e-11)

    def test_lambda_coefficients(self):
        sc = disp.buermann_coefficients(8)
        lam = sc.lambda_coeffs
        assert lam[1] == pytest.approx(-1.0, abs=1e-10)
        assert lam[3] == pytest.approx(1.0, abs=1e-10)
        assert lam[5] == pytest.approx(-4.0, abs=1e-10)
        assert abs(lam[0]) < 1e-12 and abs(lam[2]) < 1e-10 and abs(lam[4]) < 1e-10

    def test_lambda_coefficients_match_exact_route(self):
        sc = disp.buermann_coefficients(10)
        exact = [float(v) for v in oracles.lambda_coeffs_exact(10)]
        for got, ref in zip(sc.lambda_coeffs, exact):
            assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_conditioning_cap(self):
        with pytest.raises(ConditioningError):
            disp.buermann_coefficients(13)
        with pytest.raises(DomainError):
            disp.buermann_coefficients(0)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=1e-4, max_value=float(SQRT_PI_OVER_2) * (1 - 1e-9)))
def test_root_residual_property(s):
    x = disp.solve_x_star(s)
    assert x > 0.0
    assert abs(SQRT_PI_OVER_2 * erfcx(x) - s) <= 1e-12 * max(1.0, s)
