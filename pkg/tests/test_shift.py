"""Brownian shift action, adjoint, powers, norm, decomposition, truncation."""

import cmath
import math

import numpy as np
import pytest

from bsl.errors import DomainError, TruncationOverflow
from bsl.hardy import HardyVector
from bsl.shift import (
    BrownianShiftParams,
    BrownianVector,
    apply,
    apply_adjoint,
    operator_norm,
    operator_norm_diagnostic,
    power_apply,
    rank_one_decomposition,
    slot_power_closed_form,
    truncated_matrix,
)

P = BrownianShiftParams(1.0, 0.0)
N = 64


def random_vector(rng, order, max_degree=None):
    top = order if max_degree is None else max_degree + 1
    c = np.zeros(order, dtype=complex)
    c[:top] = rng.normal(size=top) + 1j * rng.normal(size=top)
    return BrownianVector(HardyVector(c), complex(rng.normal(), rng.normal()))


class TestParams:
    def test_sigma_must_be_positive(self):
        with pytest.raises(DomainError):
            BrownianShiftParams(0.0, 1.0)
        with pytest.raises(DomainError):
            BrownianShiftParams(-2.0, 1.0)

    def test_theta_normalized(self):
        p = BrownianShiftParams(1.0, -math.pi)
        assert p.theta == pytest.approx(math.pi)
        assert BrownianShiftParams(1.0, 2 * math.pi).theta == pytest.approx(0.0)

    def test_json_round_trip(self):
        p = BrownianShiftParams(0.5, 2.2)
        assert BrownianShiftParams.from_dict(p.to_dict()) == p


class TestApply:
    def test_slot_vector_image(self):
        p = BrownianShiftParams(0.7, 1.1)
        out = apply(p, BrownianVector.slot(N))
        assert out.analytic.coeffs[0] == pytest.approx(0.7)
        assert np.max(np.abs(out.analytic.coeffs[1:])) == 0.0
        assert out.scalar == pytest.approx(cmath.exp(1.1j))

    def test_monomial_shifts(self):
        out = apply(P, BrownianVector.monomial(0, N))
        assert out.analytic.coeffs[1] == pytest.approx(1.0)
        assert out.scalar == 0.0

    def test_unit_vector_image_norm(self):
        rng = np.random.default_rng(5)
        for sigma in (0.5, 1.0, 3.0):
            p = BrownianShiftParams(sigma, 0.3)
            v = random_vector(rng, N, max_degree=N - 3)
            v = BrownianVector(HardyVector(v.analytic.coeffs / v.norm), v.scalar / v.norm)
            img_sq = apply(p, v).norm_sq
            assert img_sq == pytest.approx(1.0 + sigma**2 * abs(v.scalar) ** 2, rel=1e-12)


class TestAdjoint:
    def test_slot_vector(self):
        p = BrownianShiftParams(1.0, 0.9)
        out = apply_adjoint(p, BrownianVector.slot(N))
        assert out.analytic.norm == 0.0
        assert out.scalar == pytest.approx(cmath.exp(-0.9j))

    def test_constant_feeds_slot(self):
        p = BrownianShiftParams(0.4, 0.9)
        out = apply_adjoint(p, BrownianVector.monomial(0, N))
        assert out.analytic.norm == 0.0
        assert out.scalar == pytest.approx(0.4)

    def test_monomials_shift_down(self):
        out = apply_adjoint(P, BrownianVector.monomial(3, N))
        assert out.analytic.coeffs[2] == pytest.approx(1.0)
        assert out.scalar == 0.0

    def test_pairing_identity(self):
        rng = np.random.default_rng(12)
        p = BrownianShiftParams(1.7, 2.8)
        for _ in range(100):
            v = random_vector(rng, N, max_degree=N - 2)
            w = random_vector(rng, N, max_degree=N - 2)
            lhs = apply(p, v).inner(w)
            rhs = v.inner(apply_adjoint(p, w))
            assert abs(lhs - rhs) < 1e-12 * max(1.0, v.norm * w.norm)


class TestPowers:
    def test_matches_closed_form(self):
        p = BrownianShiftParams(0.8, 2.0)
        for m in (1, 2, 7, N - 1):
            iterated = power_apply(p, m, BrownianVector.slot(N)).to_array()
            closed = slot_power_closed_form(p, m, N).to_array()
            assert np.max(np.abs(iterated - closed)) < 1e-12

    def test_two_step_example(self):
        out = power_apply(P, 2, BrownianVector.slot(N))
        assert np.allclose(out.analytic.coeffs[:3], [1.0, 1.0, 0.0])
        assert out.scalar == pytest.approx(1.0)
        assert out.norm_sq == pytest.approx(3.0)

    def test_norm_growth(self):
        p = BrownianShiftParams(0.5, 0.0)
        out = power_apply(p, 4, BrownianVector.slot(N))
        assert out.norm_sq == pytest.approx(2.0, rel=1e-12)

    def test_truncation_overflow(self):
        # the m-th power of the slot vector tops out at degree m - 1
        with pytest.raises(TruncationOverflow):
            power_apply(P, N + 1, BrownianVector.slot(N))
        with pytest.raises(TruncationOverflow):
            power_apply(P, 2, BrownianVector.monomial(N - 2, N))


class TestNorm:
    def test_closed_form(self):
        assert operator_norm(P) == pytest.approx(math.sqrt(2.0))
        assert operator_norm(BrownianShiftParams(3.0, 1.0)) == pytest.approx(math.sqrt(10.0))

    def test_power_iteration_against_svd(self):
        for sigma in (0.25, 1.0, 2.0):
            p = BrownianShiftParams(sigma, 0.4)
            diag = operator_norm_diagnostic(p, 48)
            top = np.linalg.svd(truncated_matrix(p, 48).entries, compute_uv=False)[0]
            assert diag["estimate"] == pytest.approx(top, abs=1e-10)
            assert diag["gap"] < 1e-8

    def test_norm_never_exceeded_on_unit_sphere(self):
        rng = np.random.default_rng(0xB705)
        p = BrownianShiftParams(2.0, 5.0)
        bound = operator_norm(p)
        for _ in range(1000):
            v = random_vector(rng, 32)
            assert apply(p, v).norm <= bound * v.norm + 1e-12
        attained = apply(p, BrownianVector.slot(32)).norm
        assert attained == pytest.approx(bound, abs=1e-12)


class TestDecomposition:
    def test_sum_recovers_matrix(self):
        p = BrownianShiftParams(1.0, math.pi / 3)
        iso, rank1 = rank_one_decomposition(p, 16)
        total = truncated_matrix(p, 16).entries
        assert np.array_equal(iso.entries + rank1.entries, total)

    def test_rank_one_part(self):
        p = BrownianShiftParams(1.0, math.pi / 3)
        _, rank1 = rank_one_decomposition(p, 16)
        sv = np.linalg.svd(rank1.entries, compute_uv=False)
        assert int(np.sum(sv > 1e-10)) == 1

    def test_rank_one_action(self):
        p = BrownianShiftParams(0.6, 1.2)
        _, rank1 = rank_one_decomposition(p, 16)
        v = BrownianVector(HardyVector(np.ones(16)), 2.0)
        out = rank1.apply_array(v.to_array())
        assert out[0] == pytest.approx(0.6 * 2.0)
        assert np.max(np.abs(out[1:-1])) == 0.0
        assert out[-1] == pytest.approx((cmath.exp(1.2j) - 1.0) * 2.0)

    def test_isometric_part_preserves_norm_below_top_degree(self):
        p = BrownianShiftParams(1.0, 2.0)
        iso, _ = rank_one_decomposition(p, 32)
        rng = np.random.default_rng(8)
        v = random_vector(rng, 32, max_degree=29)
        arr = v.to_array()
        assert np.linalg.norm(iso.apply_array(arr)) == pytest.approx(
            np.linalg.norm(arr), rel=1e-12
        )


class TestTruncatedMatrix:
    def test_matrix_columns_match_apply(self):
        p = BrownianShiftParams(1.3, 0.7)
        op = truncated_matrix(p, 12)
        for k in range(12):
            col = op.entries[:, k]
            direct = apply(p, BrownianVector.monomial(k, 12)).to_array()
            assert np.array_equal(col, direct)
        col = op.entries[:, 12]
        direct = apply(p, BrownianVector.slot(12)).to_array()
        assert np.array_equal(col, direct)

    def test_top_degree_column_dropped(self):
        op = truncated_matrix(P, 12)
        assert np.max(np.abs(op.entries[:, 11])) == 0.0

    def test_conjugate_transpose_matches_adjoint(self):
        p = BrownianShiftParams(0.9, 2.1)
        op = truncated_matrix(p, 12)
        adj = op.adjoint_entries
        for k in range(12):
            direct = apply_adjoint(p, BrownianVector.monomial(k, 12)).to_array()
            assert np.allclose(adj[:, k], direct)
        direct = apply_adjoint(p, BrownianVector.slot(12)).to_array()
        assert np.allclose(adj[:, 12], direct)

    def test_csv_export_shape(self):
        op = truncated_matrix(P, 4)
        rows = op.to_csv().strip().split("\n")
        assert len(rows) == 5
        first = rows[0].split('","')
        assert len(first) == 5
        assert rows[0].startswith('"')

    def test_too_small_truncation_rejected(self):
        with pytest.raises(DomainError):
            truncated_matrix(P, 1)
