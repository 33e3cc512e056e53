"""Irreducibility witnesses: joint orbit spans and commutant dimensions."""

import math

import numpy as np
import pytest

from bsl.errors import DomainError
from bsl.commutant import (
    ablated_commutant_dimension,
    commutant_dimension,
    joint_orbit_span,
)
from bsl.hardy import HardyVector
from bsl.shift import BrownianShiftParams, BrownianVector


class TestOrbit:
    def test_slot_start_reaches_everything(self):
        p = BrownianShiftParams(1.0, math.pi / 4)
        cert = joint_orbit_span(p, BrownianVector.slot(32), start_label="slot")
        assert cert.full
        assert cert.reached_dimension == 33

    def test_constant_start_reaches_everything(self):
        p = BrownianShiftParams(2.0, 1.0)
        cert = joint_orbit_span(p, BrownianVector.monomial(0, 32))
        assert cert.full

    def test_random_starts_full(self):
        rng = np.random.default_rng(0xB705)
        p = BrownianShiftParams(1.0, math.pi / 4)
        for _ in range(50):
            c = rng.normal(size=64) + 1j * rng.normal(size=64)
            v = BrownianVector(HardyVector(c), complex(rng.normal(), rng.normal()))
            assert joint_orbit_span(p, v, start_label="random").full

    def test_zero_start_rejected(self):
        with pytest.raises(DomainError):
            joint_orbit_span(
                BrownianShiftParams(1.0, 0.0), BrownianVector.slot(8).from_array(np.zeros(9))
            )

    def test_monotone_in_truncation(self):
        p = BrownianShiftParams(0.7, 2.0)
        dims = []
        for n in (16, 32, 64):
            v = BrownianVector.monomial(3, n)
            dims.append(joint_orbit_span(p, v).reached_dimension)
        assert dims == sorted(dims)

    def test_certificate_json_fields(self):
        p = BrownianShiftParams(1.0, 0.5)
        cert = joint_orbit_span(p, BrownianVector.slot(16), start_label="slot")
        data = cert.to_dict()
        assert set(data) == {"sigma", "theta", "N", "start", "reached", "full"}
        assert data["full"] is True

    def test_steps_recorded(self):
        p = BrownianShiftParams(1.0, 0.5)
        cert = joint_orbit_span(p, BrownianVector.slot(8))
        assert set(cert.steps) <= {"B", "B*"}
        assert len(cert.steps) == cert.reached_dimension - 1


class TestCommutant:
    @pytest.mark.parametrize("sigma,theta", [(1.0, 0.0), (0.5, math.pi / 2)])
    def test_dimension_is_one(self, sigma, theta):
        assert commutant_dimension(BrownianShiftParams(sigma, theta), 32) == 1

    def test_identity_always_commutes(self):
        # sanity floor: the computed dimension can never drop below 1
        assert commutant_dimension(BrownianShiftParams(2.0, 1.0), 24) >= 1

    def test_reducible_control(self):
        dim = ablated_commutant_dimension(BrownianShiftParams(1.0, 0.0), 32)
        assert dim >= 2

    def test_desk_scale_guard(self):
        with pytest.raises(DomainError):
            commutant_dimension(BrownianShiftParams(1.0, 0.0), 256)
