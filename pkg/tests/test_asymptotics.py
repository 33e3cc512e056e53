"""Power growth and normalized-power decay: exact formulas and bounds."""

import math

import numpy as np
import pytest

from bsl.errors import TruncationOverflow
from bsl.asymptotics import (
    adjoint_power_norm_closed_form,
    c00_adjoint_decay,
    c00_forward_decay,
    power_norm_growth,
    sot_convergence_certificate,
)
from bsl.hardy import HardyVector
from bsl.shift import BrownianShiftParams, BrownianVector, apply

N = 256


def unit_random(rng, order, max_degree):
    c = np.zeros(order, dtype=complex)
    c[: max_degree + 1] = rng.normal(size=max_degree + 1) + 1j * rng.normal(
        size=max_degree + 1
    )
    v = BrownianVector(HardyVector(c), complex(rng.normal(), rng.normal()))
    return BrownianVector(HardyVector(c / v.norm), v.scalar / v.norm)


class TestPowerGrowth:
    def test_exact_formula(self):
        growth = power_norm_growth(BrownianShiftParams(1.0, 0.0), 100, N)
        assert growth[0] == pytest.approx(2.0, rel=1e-14)
        assert growth[99] == pytest.approx(101.0, rel=1e-14)

    def test_fractional_sigma(self):
        growth = power_norm_growth(BrownianShiftParams(0.5, 1.0), 4, 16)
        assert growth[3] == pytest.approx(2.0, rel=1e-14)

    def test_strictly_increasing_and_unbounded_trend(self):
        growth = power_norm_growth(BrownianShiftParams(0.7, 2.0), 150, N)
        assert np.all(np.diff(growth) > 0)
        assert growth[-1] > 50

    def test_overflow_guard(self):
        with pytest.raises(TruncationOverflow):
            power_norm_growth(BrownianShiftParams(1.0, 0.0), N, N)


class TestForwardDecay:
    def test_slot_vector_exact_value(self):
        p = BrownianShiftParams(1.0, 0.0)
        report = c00_forward_decay(p, BrownianVector.slot(N), 10, N)
        # ||Bt^3 (0,1)||^2 = (1 + 3) / 2^3
        assert report.measured[2] ** 2 == pytest.approx(0.5, rel=1e-12)
        # for the slot vector the forward bound is an identity
        assert np.allclose(report.measured, report.bound, rtol=1e-12)
        assert report.satisfied

    def test_pure_shift_orbit(self):
        p = BrownianShiftParams(2.0, 1.0)
        u = BrownianVector.monomial(0, N)
        report = c00_forward_decay(p, u, 12, N)
        expected = (1.0 + 4.0) ** (-np.arange(1, 13) / 2.0)
        assert np.allclose(report.measured, expected, rtol=1e-12)

    def test_random_vectors_dominated(self):
        rng = np.random.default_rng(0xB705)
        p = BrownianShiftParams(2.0, 0.8)
        for _ in range(50):
            u = unit_random(rng, N, 180)
            report = c00_forward_decay(p, u, 50, N)
            assert report.satisfied
            assert report.measured[-1] < 1e-3

    def test_overflow_guard(self):
        with pytest.raises(TruncationOverflow):
            c00_forward_decay(
                BrownianShiftParams(1.0, 0.0), BrownianVector.monomial(200, N), 60, N
            )


class TestAdjointDecay:
    def test_slot_vector_closed_form(self):
        p = BrownianShiftParams(1.0, 0.0)
        report = c00_adjoint_decay(p, BrownianVector.slot(N), 6, N)
        assert report.measured[1] == pytest.approx(0.5, rel=1e-12)  # (1+1)^{-2/2}
        assert report.satisfied

    def test_monomial_below_horizon(self):
        p = BrownianShiftParams(1.0, 0.0)
        report = c00_adjoint_decay(p, BrownianVector.monomial(3, N), 5, N)
        assert report.measured[4] == pytest.approx(2.0 ** (-5 / 2), rel=1e-12)

    def test_monomial_above_horizon(self):
        p = BrownianShiftParams(1.0, 0.0)
        report = c00_adjoint_decay(p, BrownianVector.monomial(3, N), 2, N)
        assert report.measured[1] == pytest.approx(0.5, rel=1e-12)

    def test_closed_form_helper_regimes(self):
        p = BrownianShiftParams(1.0, 0.4)
        assert adjoint_power_norm_closed_form(p, 2) == pytest.approx(0.5)
        assert adjoint_power_norm_closed_form(p, 5, 3) == pytest.approx(
            2.0 ** (-5 / 2), rel=1e-14
        )
        assert adjoint_power_norm_closed_form(p, 2, 3) == pytest.approx(0.5)

    def test_random_vectors_dominated(self):
        rng = np.random.default_rng(17)
        for sigma in (0.25, 1.0, 4.0):
            p = BrownianShiftParams(sigma, 2.0)
            for _ in range(30):
                u = unit_random(rng, N, 180)
                report = c00_adjoint_decay(p, u, 60, N)
                assert report.satisfied


class TestReports:
    def test_csv_shape(self):
        p = BrownianShiftParams(1.0, 0.0)
        report = c00_forward_decay(p, BrownianVector.slot(N), 3, N)
        lines = report.to_csv().strip().split("\n")
        assert lines[0] == "n,measured,bound"
        assert len(lines) == 4

    def test_bound_eventually_decreasing(self):
        # the bound (||u||^2 + n |c0|^2 s^2)/(1+s^2)^n decreases past n > 1/s^2 + 1
        for sigma in (0.5, 1.0, 2.0):
            p = BrownianShiftParams(sigma, 0.0)
            report = c00_forward_decay(p, BrownianVector.slot(N), 80, N)
            start = int(1.0 / sigma**2 + 1.0) + 1
            tail = report.bound[start:]
            assert np.all(np.diff(tail) < 0)

    def test_contraction_property(self):
        rng = np.random.default_rng(23)
        p = BrownianShiftParams(1.5, 1.0)
        scale = math.sqrt(1.0 + p.sigma**2)
        for _ in range(100):
            u = unit_random(rng, 64, 60)
            assert apply(p, u).norm / scale <= u.norm + 1e-12


class TestCertificate:
    def test_small_eps_certified(self):
        p = BrownianShiftParams(1.0, 0.0)
        cert = sot_convergence_certificate(p, 8, 60, 1e-3, N)
        assert cert["certified_n"] is not None
        assert cert["certified_n"] <= 30
        assert cert["max_norm"] < 1e-3

    def test_trivial_eps_certified_at_one(self):
        p = BrownianShiftParams(1.0, 0.0)
        cert = sot_convergence_certificate(p, 8, 10, 2.0, N)
        assert cert["certified_n"] == 1

    def test_reports_failure_at_horizon(self):
        p = BrownianShiftParams(0.1, 0.0)
        cert = sot_convergence_certificate(p, 4, 5, 1e-9, N)
        assert cert["certified_n"] is None
        assert cert["max_norm"] >= 1e-9

    def test_slow_decay_certified_n_scales(self):
        p = BrownianShiftParams(0.5, 0.0)
        cert = sot_convergence_certificate(p, 4, 120, 1e-4, N)
        assert cert["certified_n"] is not None
        # decay rate log(1+sigma^2) per step: the certified step count is
        # at least log(1/eps)/log(1+sigma^2) up to the polynomial factor
        assert cert["certified_n"] >= math.log(1e4) / math.log(1.25) - 5
