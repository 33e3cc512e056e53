"""Hardy-space core: truncated vectors, inner functions, quadrature,
boundary-root division, g construction, and the model-space projection."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_laguerre

from bsl.errors import (
    DimensionMismatch,
    DomainError,
    NonvanishingRoot,
    PrecisionLoss,
    UndefinedBoundaryValue,
)
from bsl.hardy import (
    AtomicSingular,
    BlaschkeProduct,
    HardyVector,
    ProductInner,
    boundary_value,
    circle_norm_squared,
    divide_by_boundary_root,
    g_norm_squared,
    g_norm_squared_quadrature,
    h2_inner_product,
    inner_eval,
    inner_from_descriptor,
    inner_to_descriptor,
    make_g,
    model_space_project,
    taylor_coefficients,
)

ATOM = AtomicSingular(atom_angle=0.0, mass=1.0)


def coeff_strategy(n=24):
    return st.lists(
        st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
        min_size=2,
        max_size=n,
    )


class TestHardyVector:
    def test_norm_is_parseval(self):
        v = HardyVector([1.0, 2.0j, -1.0])
        assert v.norm_sq == pytest.approx(6.0)

    def test_inner_product_examples(self):
        one = HardyVector([1.0, 0.0])
        z = HardyVector([0.0, 1.0])
        assert h2_inner_product(one, one) == pytest.approx(1.0)
        # the scalar line is orthogonal to z H^2
        assert h2_inner_product(z, one) == pytest.approx(0.0)
        f = HardyVector([1.0, 1.0])
        g = HardyVector([1.0, -1.0])
        assert h2_inner_product(f, g) == pytest.approx(0.0)

    def test_inner_product_conjugate_symmetry(self):
        f = HardyVector([1.0 + 1j, 0.5])
        g = HardyVector([2.0, -1j])
        assert f.inner(g) == pytest.approx(g.inner(f).conjugate())

    def test_mismatched_orders_raise(self):
        with pytest.raises(DimensionMismatch):
            h2_inner_product(HardyVector([1.0]), HardyVector([1.0, 2.0]))

    def test_shift_drops_top_coefficient(self):
        v = HardyVector([1.0, 2.0, 3.0])
        assert np.allclose(v.shift().coeffs, [0.0, 1.0, 2.0])

    def test_coefficients_are_frozen(self):
        v = HardyVector([1.0, 2.0])
        with pytest.raises(ValueError):
            v.coeffs[0] = 5.0


class TestInnerEval:
    def test_blaschke_zero_at_origin_is_identity(self):
        b0 = BlaschkeProduct(zeros=(0.0,))
        assert inner_eval(b0, 0.5) == pytest.approx(0.5)

    def test_blaschke_at_origin(self):
        assert inner_eval(BlaschkeProduct(zeros=(0.5,)), 0.0) == pytest.approx(-0.5)

    def test_atomic_at_origin(self):
        assert inner_eval(ATOM, 0.0) == pytest.approx(math.exp(-1.0))

    def test_product_multiplies(self):
        prod = ProductInner((BlaschkeProduct(zeros=(0.5,)), ATOM))
        assert inner_eval(prod, 0.0) == pytest.approx(-0.5 * math.exp(-1.0))

    def test_outside_disc_rejected(self):
        with pytest.raises(DomainError):
            inner_eval(ATOM, 1.5)

    def test_atom_evaluation_rejected(self):
        with pytest.raises(UndefinedBoundaryValue):
            inner_eval(ATOM, 1.0 + 0.0j)

    def test_zero_outside_disc_rejected(self):
        with pytest.raises(DomainError):
            BlaschkeProduct(zeros=(1.2,))

    def test_interior_modulus_below_one(self):
        prod = ProductInner((BlaschkeProduct(zeros=(0.3, -0.2j)), ATOM))
        rng = np.random.default_rng(7)
        for _ in range(25):
            z = 0.95 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
            assert abs(inner_eval(prod, z)) < 1.0


class TestBoundaryValue:
    def test_blaschke_value_at_zero_angle(self):
        bv = boundary_value(BlaschkeProduct(zeros=(0.3,)), 0.0)
        assert bv.defined and bv.value == pytest.approx(1.0)

    def test_atomic_opposite_point(self):
        bv = boundary_value(ATOM, math.pi)
        assert bv.defined and bv.value == pytest.approx(1.0)

    def test_atom_is_undefined(self):
        assert not boundary_value(ATOM, 0.0).defined

    def test_atom_detection_inside_product(self):
        prod = ProductInner((BlaschkeProduct(zeros=(0.3,)), ATOM))
        assert not boundary_value(prod, 0.0).defined
        assert boundary_value(prod, 1.0).defined

    def test_unimodularity_off_atoms(self):
        prod = ProductInner((BlaschkeProduct(zeros=(0.6, 0.1 + 0.4j)), ATOM))
        for theta in np.linspace(0.05, 2 * math.pi - 0.05, 60):
            bv = boundary_value(prod, theta)
            assert bv.defined
            assert abs(bv.value) == pytest.approx(1.0, abs=1e-9)


class TestTaylorCoefficients:
    def test_identity_function(self):
        c = taylor_coefficients(BlaschkeProduct(zeros=(0.0,)), 4).coeffs
        assert np.allclose(c, [0.0, 1.0, 0.0, 0.0], atol=1e-12)

    def test_blaschke_geometric_expansion(self):
        # (z - a)/(1 - a z) = -a + (1 - a^2) sum_{k>=1} a^{k-1} z^k
        c = taylor_coefficients(BlaschkeProduct(zeros=(0.5,)), 3).coeffs
        assert np.allclose(c, [-0.5, 0.75, 0.375], atol=1e-12)

    def test_atomic_constant_term(self):
        c = taylor_coefficients(ATOM, 4).coeffs
        assert c[0] == pytest.approx(math.exp(-1.0), abs=1e-13)

    def test_atomic_against_laguerre_oracle(self):
        # exp((z+1)/(z-1)) = e^{-1} exp(-2z/(1-z)), whose Taylor expansion is
        # e^{-1} sum_n (L_n(2) - L_{n-1}(2)) z^n in Laguerre polynomials
        n = 64
        c = taylor_coefficients(ATOM, n).coeffs
        ln = np.array([eval_laguerre(m, 2.0) for m in range(n)])
        lm = np.concatenate([[0.0], ln[:-1]])
        oracle = math.exp(-1.0) * (ln - lm)
        assert np.max(np.abs(c - oracle)) < 1e-12

    def test_inner_function_energy_not_exceeded(self):
        c = taylor_coefficients(ATOM, 256).coeffs
        assert np.sum(np.abs(c) ** 2) <= 1.0 + 1e-12

    def test_unreachable_agreement_reports_residual(self):
        with pytest.raises(PrecisionLoss) as err:
            taylor_coefficients(ATOM, 64, agreement_tol=1e-30, max_grid=4096)
        assert err.value.residual > 0


class TestCircleQuadrature:
    def test_constant_sampler(self):
        assert circle_norm_squared(lambda t: 1.0) == pytest.approx(1.0)

    def test_parseval_for_truncated_series(self):
        rng = np.random.default_rng(3)
        coeffs = rng.normal(size=20) + 1j * rng.normal(size=20)
        f = HardyVector(coeffs)
        val = circle_norm_squared(lambda t: f.evaluate(cmath.exp(1j * t)))
        assert val == pytest.approx(f.norm_sq, rel=1e-12)

    def test_adaptive_matches_uniform_for_smooth(self):
        f = HardyVector([1.0, 0.5, 0.25j])
        sampler = lambda t: f.evaluate(cmath.exp(1j * t))
        a = circle_norm_squared(sampler, method="adaptive", tol=1e-11)
        u = circle_norm_squared(sampler, method="uniform")
        assert a == pytest.approx(u, rel=1e-9)

    def test_unknown_method_rejected(self):
        with pytest.raises(DomainError):
            circle_norm_squared(lambda t: 1.0, method="bogus")

    def test_uniform_nonconvergence_reports_residual(self):
        rng = np.random.default_rng(2)
        with pytest.raises(PrecisionLoss):
            circle_norm_squared(
                lambda t: rng.normal(), method="uniform", tol=1e-14, max_grid=2048
            )

    def test_trusted_division_skips_root_gate(self):
        # root_tol=None divides regardless of the boundary residual
        h = HardyVector([1.0, 1.0])
        q = divide_by_boundary_root(h, 0.0, root_tol=None)
        assert q.order == 2


class TestDivision:
    def test_linear_factor(self):
        q = divide_by_boundary_root(HardyVector([-1.0, 1.0, 0.0]), 0.0)
        assert np.allclose(q.coeffs, [1.0, 0.0, 0.0], atol=1e-14)

    def test_quadratic_factorization(self):
        q = divide_by_boundary_root(HardyVector([-1.0, 0.0, 1.0, 0.0]), 0.0)
        assert np.allclose(q.coeffs, [1.0, 1.0, 0.0, 0.0], atol=1e-14)

    def test_nonvanishing_rejected(self):
        with pytest.raises(NonvanishingRoot):
            divide_by_boundary_root(HardyVector([1.0, 1.0]), 0.0)

    @settings(max_examples=40, deadline=None)
    @given(coeff_strategy(), st.floats(0.0, 2 * math.pi - 1e-9))
    def test_round_trip(self, coeffs, theta):
        # multiply a random truncation by (z - w), divide back
        n = 256
        q_true = np.zeros(n, dtype=complex)
        q_true[: len(coeffs)] = coeffs
        w = cmath.exp(1j * theta)
        h = np.zeros(n, dtype=complex)
        h[1:] = q_true[:-1]
        h -= w * q_true
        q = divide_by_boundary_root(HardyVector(h), theta)
        assert np.max(np.abs(q.coeffs - q_true)) < 1e-10


class TestMakeG:
    def test_simple_shift_gives_constant(self):
        for theta, sigma in ((0.0, 1.0), (1.3, 2.0)):
            g = make_g(BlaschkeProduct(zeros=(0.0,)), theta, sigma, 32)
            expected = sigma * cmath.exp(-1j * theta)
            assert g.coeffs[0] == pytest.approx(expected, abs=1e-12)
            assert np.max(np.abs(g.coeffs[1:])) < 1e-12

    def test_blaschke_norm_closed_form(self):
        g = make_g(BlaschkeProduct(zeros=(0.5,)), 0.0, 1.0, 256)
        assert g.norm_sq == pytest.approx(3.0, rel=1e-12)

    def test_atomic_norm_by_quadrature(self):
        val = g_norm_squared_quadrature(ATOM, math.pi, 1.0)
        assert val == pytest.approx(0.5, abs=1e-6)

    def test_accurate_norm_dispatches_on_atoms(self):
        assert g_norm_squared(BlaschkeProduct(zeros=(0.5,)), 0.0, 1.0) == pytest.approx(3.0)
        assert g_norm_squared(ATOM, math.pi, 2.0) == pytest.approx(2.0, abs=4e-6)

    def test_linear_in_sigma(self):
        g1 = make_g(BlaschkeProduct(zeros=(0.3,)), 1.0, 1.0, 64)
        g2 = make_g(BlaschkeProduct(zeros=(0.3,)), 1.0, 2.5, 64)
        assert np.allclose(2.5 * g1.coeffs, g2.coeffs)
        assert g2.norm_sq == pytest.approx(2.5**2 * g1.norm_sq)

    def test_undefined_boundary_propagates(self):
        with pytest.raises(UndefinedBoundaryValue):
            make_g(ATOM, 0.0, 1.0, 32)

    def test_g_lies_in_model_space(self):
        phi = BlaschkeProduct(zeros=(0.5,))
        g = make_g(phi, 0.0, 1.0, 256)
        projected = model_space_project(g, phi)
        assert np.max(np.abs(projected.coeffs - g.coeffs)) < 1e-8

    def test_atomic_g_membership_limited_by_tail(self):
        # the atomic Taylor tail decays like N^(-1/2) in energy, so the
        # projection residual is tail-sized rather than float-sized; it must
        # still be visibly small and shrink with N
        g256 = make_g(ATOM, math.pi, 1.0, 256)
        r256 = (model_space_project(g256, ATOM) - g256).norm
        g1024 = make_g(ATOM, math.pi, 1.0, 1024)
        r1024 = (model_space_project(g1024, ATOM) - g1024).norm
        assert r256 < 0.1
        assert r1024 < r256

    def test_same_angle_atoms_merge_masses(self):
        # exp(a(z+w)/(z-w)) exp(b(z+w)/(z-w)) = exp((a+b)(z+w)/(z-w))
        split = ProductInner((AtomicSingular(0.0, 0.5), AtomicSingular(0.0, 0.5)))
        merged = AtomicSingular(0.0, 1.0)
        for z in (0.0, 0.3 - 0.4j, 0.8j):
            assert inner_eval(split, z) == pytest.approx(inner_eval(merged, z))
        v_split = g_norm_squared_quadrature(split, math.pi, 1.0)
        v_merged = g_norm_squared_quadrature(merged, math.pi, 1.0)
        assert v_split == pytest.approx(v_merged, abs=1e-9)

    def test_two_distinct_atoms_quadrature_runs(self):
        phi = ProductInner((AtomicSingular(0.0, 1.0), AtomicSingular(2.0, 0.7)))
        value = g_norm_squared_quadrature(phi, math.pi, 1.0)
        assert value > 0
        # sanity against the Parseval sum of the truncation: they agree up
        # to the (slowly decaying) tail
        g = make_g(phi, math.pi, 1.0, 512)
        assert abs(value - g.norm_sq) < 0.05


class TestModelSpaceProjection:
    def test_model_space_of_z_is_constants(self):
        f = HardyVector([3.0, 0.0, 1.0, 0.0])
        p = model_space_project(f, BlaschkeProduct(zeros=(0.0,)))
        assert np.allclose(p.coeffs, [3.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_multiples_of_phi_project_to_zero(self):
        phi = BlaschkeProduct(zeros=(0.5, -0.2j))
        phi_c = taylor_coefficients(phi, 128).coeffs
        h = np.zeros(128, dtype=complex)
        h[:5] = [1.0, -2.0, 0.5j, 0.0, 1.0]
        f = HardyVector(np.convolve(phi_c, h)[:128])
        p = model_space_project(f, phi)
        assert np.max(np.abs(p.coeffs)) < 1e-10

    @settings(max_examples=25, deadline=None)
    @given(coeff_strategy())
    def test_idempotent_and_self_adjoint(self, coeffs):
        n = 96
        phi = BlaschkeProduct(zeros=(0.4, 0.1 + 0.3j))
        f = np.zeros(n, dtype=complex)
        f[: len(coeffs)] = coeffs
        fv = HardyVector(f)
        once = model_space_project(fv, phi)
        twice = model_space_project(once, phi)
        assert np.max(np.abs(twice.coeffs - once.coeffs)) < 1e-10
        rng = np.random.default_rng(11)
        gv = HardyVector(rng.normal(size=n) + 1j * rng.normal(size=n))
        pg = model_space_project(gv, phi)
        lhs = once.inner(gv)
        rhs = fv.inner(pg)
        assert lhs == pytest.approx(rhs, abs=1e-9 * max(1.0, fv.norm * gv.norm))


class TestDescriptors:
    def test_round_trip(self):
        phi = ProductInner(
            (BlaschkeProduct(zeros=(0.5, -0.25 + 0.1j), const_angle=0.4), ATOM)
        )
        data = inner_to_descriptor(phi)
        assert data["kind"] == "product"
        again = inner_from_descriptor(data)
        for z in (0.0, 0.3 + 0.2j, -0.7j):
            assert inner_eval(again, z) == pytest.approx(inner_eval(phi, z))

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError):
            inner_from_descriptor({"kind": "mystery"})
