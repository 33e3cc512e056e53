"""Invariant subspaces of the Brownian shift: construction, invariance
residuals, unitary equivalence of restrictions, and restriction reduction.

A nonzero closed invariant subspace of the shift with covariance sigma and
angle theta has one of two canonical shapes:

* Type I:   phi H^2 (+) {0} for an inner function phi;
* Type II:  C [g; 1] (+) (phi H^2 (+) {0}) where phi has a boundary value
            at w = exp(1j*theta) and
            g = sigma (conj(phi(w)) phi - 1) / (z - w),
            which lies in the model space K_phi, so g is orthogonal to
            phi H^2 and the displayed sum is orthogonal.

Restrictions to two such subspaces are unitarily equivalent exactly when
both are Type I, or both are Type II with equal angles and

    sigma_2^2 (1 + ||g_1||^2) = sigma_1^2 (1 + ||g_2||^2).

The equivalence is witnessed constructively: the unitary maps the
canonical basis of one subspace onto the other with a single modulus-one
scalar on the phi block and a positive scalar on the g direction.  The
restriction of the shift to a Type II subspace is itself unitarily
equivalent to the shift with reduced covariance sigma / sqrt(1 + ||g||^2)
and the same angle.

Two subspaces generated by phi and c*phi with |c| = 1 are the same set
(phi H^2 = (c phi) H^2, and g changes covariantly), so descriptors are
compared by the subspace they generate, never by the representative phi.

Truncation caveat: basis vectors whose top Taylor content would be lost to
the truncation are excluded from residual checks (an adaptive guard based
on the measured coefficient tail), and compressions of subspaces built
from singular atoms use the canonical orthonormal basis rather than raw
coefficient vectors, whose tails decay too slowly (like N^(-1/4) in norm)
for coefficient-space orthonormality at any desk-scale truncation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ContractViolation, DimensionMismatch, DomainError
from .hardy import (
    DEFAULT_TRUNC,
    HardyVector,
    InnerFunction,
    angle_gap,
    boundary_value,
    g_norm_squared_quadrature,
    has_atomic_factor,
    inner_from_descriptor,
    inner_to_descriptor,
    make_g,
    taylor_coefficients,
    wrap_angle,
)
from .shift import BrownianShiftParams, BrownianVector, truncated_matrix

#: energy threshold for the adaptive tail guard of the phi block
_GUARD_ENERGY = 1e-20


@dataclass(frozen=True, eq=False)
class SubspaceSpec:
    """Descriptor of a canonical invariant subspace.

    Type I specs carry only ``phi``; Type II specs additionally carry the
    angle and covariance of the shift they are invariant under, plus the
    derived data (boundary value, g, ||g||^2) computed eagerly.
    """

    phi: InnerFunction
    theta: float | None = None
    sigma: float | None = None
    trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        if (self.theta is None) != (self.sigma is None):
            raise DomainError("Type II needs both theta and sigma, Type I neither")
        if self.sigma is not None:
            if self.sigma <= 0:
                raise DomainError("covariance must be positive")
            object.__setattr__(self, "theta", wrap_angle(self.theta))
            object.__setattr__(self, "sigma", float(self.sigma))
            bv = boundary_value(self.phi, self.theta)
            if not bv.defined:
                raise DomainError(
                    "no boundary value at the requested angle; "
                    "the subspace is not Type II there"
                )
        # eager derived cache so instances are safe to share across workers
        _ = self.phi_coeffs
        if self.is_type2:
            _ = self.g, self.g_norm_sq

    @property
    def kind(self) -> str:
        return "type2" if self.is_type2 else "type1"

    @property
    def is_type2(self) -> bool:
        return self.sigma is not None

    @property
    def params(self) -> BrownianShiftParams:
        if not self.is_type2:
            raise ContractViolation("Type I subspaces carry no shift parameters")
        return BrownianShiftParams(self.sigma, self.theta)

    @cached_property
    def phi_coeffs(self) -> HardyVector:
        return taylor_coefficients(self.phi, self.trunc)

    @cached_property
    def mu_phi(self) -> complex:
        """conj(phi(exp(1j*theta))), the unimodular scalar of the g formula."""
        if not self.is_type2:
            raise ContractViolation("mu_phi is defined for Type II only")
        return boundary_value(self.phi, self.theta).value.conjugate()

    @cached_property
    def g(self) -> HardyVector:
        if not self.is_type2:
            raise ContractViolation("g is defined for Type II only")
        return make_g(self.phi, self.theta, self.sigma, self.trunc)

    @cached_property
    def g_norm_sq_parseval(self) -> float:
        return self.g.norm_sq

    @cached_property
    def g_norm_sq(self) -> float:
        """Accurate ||g||^2: Parseval unless a singular atom makes the
        coefficient tail heavy, then windowed quadrature."""
        if has_atomic_factor(self.phi):
            return g_norm_squared_quadrature(self.phi, self.theta, self.sigma)
        return self.g_norm_sq_parseval

    def g_norm_cross_check_gap(self) -> float:
        """|Parseval - quadrature| for ||g||^2 (tail diagnostic)."""
        quad_val = g_norm_squared_quadrature(self.phi, self.theta, self.sigma)
        return abs(self.g_norm_sq_parseval - quad_val)

    @cached_property
    def block_size(self) -> int:
        """Number of phi H^2 basis vectors kept after the tail guard."""
        tail = np.cumsum(np.abs(self.phi_coeffs.coeffs[::-1]) ** 2)[::-1]
        idx = np.nonzero(tail <= _GUARD_ENERGY)[0]
        guard = max(8, int(idx[0]) - 1) if idx.size else 8
        return max(1, self.trunc - guard)

    def to_descriptor(self) -> dict:
        out = {"kind": self.kind, "phi": inner_to_descriptor(self.phi)}
        if self.is_type2:
            out["theta"] = self.theta
            out["sigma"] = self.sigma
        return out

    @classmethod
    def from_descriptor(cls, data: dict, trunc: int = DEFAULT_TRUNC) -> "SubspaceSpec":
        kind = data.get("kind")
        phi = inner_from_descriptor(data["phi"])
        if kind == "type1":
            return cls(phi, trunc=trunc)
        if kind == "type2":
            return cls(phi, theta=data["theta"], sigma=data["sigma"], trunc=trunc)
        raise DomainError(f"unknown subspace kind {kind!r}")


def type1(phi: InnerFunction, trunc: int = DEFAULT_TRUNC) -> SubspaceSpec:
    return SubspaceSpec(phi, trunc=trunc)


def type2(
    phi: InnerFunction, theta: float, sigma: float, trunc: int = DEFAULT_TRUNC
) -> SubspaceSpec:
    return SubspaceSpec(phi, theta=theta, sigma=sigma, trunc=trunc)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


def basis_matrix(spec: SubspaceSpec, size: int | None = None) -> np.ndarray:
    """Ambient coordinate matrix of the canonical basis, one column per
    basis vector (scalar slot last).

    Type I columns are the truncations of z^k phi, k < size; Type II
    prepends [g; 1] normalized by its own truncated norm.  ``size`` counts
    the phi-block columns and defaults to the guarded block size.
    """
    n = spec.trunc
    if size is None:
        size = spec.block_size
    if not 1 <= size <= n:
        raise DimensionMismatch(f"block size {size} outside 1..{n}")
    phi_c = spec.phi_coeffs.coeffs
    cols = []
    if spec.is_type2:
        first = np.zeros(n + 1, dtype=np.complex128)
        first[:n] = spec.g.coeffs
        first[n] = 1.0
        cols.append(first / np.linalg.norm(first))
    for k in range(size):
        col = np.zeros(n + 1, dtype=np.complex128)
        col[k:n] = phi_c[: n - k]
        cols.append(col)
    return np.column_stack(cols)


def basis(spec: SubspaceSpec, size: int | None = None) -> list[BrownianVector]:
    """Canonical basis as vectors; see ``basis_matrix`` for the layout."""
    m = basis_matrix(spec, size)
    return [BrownianVector.from_array(m[:, j]) for j in range(m.shape[1])]


def gram_residual(spec: SubspaceSpec, size: int | None = None) -> float:
    """Max-abs deviation of the basis Gram matrix from the identity."""
    m = basis_matrix(spec, size)
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def invariance_residual(
    spec: SubspaceSpec, p: BrownianShiftParams, trunc: int | None = None
) -> float:
    """Max distance of shift images of basis vectors from the basis span.

    The top phi-block vector is excluded from testing (its image's top
    coefficient falls past the truncation); every other image of a
    matched-parameter Type II spec, and any image of a Type I spec, lies in
    the span exactly, so the residual is pure floating-point noise.
    """
    if trunc is not None and trunc != spec.trunc:
        raise DimensionMismatch("spec was built at a different truncation")
    bm = basis_matrix(spec)
    if bm.shape[1] < 2:
        return 0.0
    q, _ = np.linalg.qr(bm)
    a = truncated_matrix(p, spec.trunc).entries
    images = a @ bm[:, :-1]  # all but the top phi-block column
    defects = images - q @ (q.conj().T @ images)
    return float(np.max(np.linalg.norm(defects, axis=0)))


# ---------------------------------------------------------------------------
# equivalence classification
# ---------------------------------------------------------------------------

REASONS = ("both_type_I", "type_mismatch", "angle_mismatch", "ratio_mismatch", "type_II_match")


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of the unitary-equivalence test for a pair of restrictions."""

    equivalent: bool
    reason: str
    ratio_residual: float
    theta_gap: float = 0.0

    def to_dict(self, pair_id: str | None = None) -> dict:
        out = {
            "equivalent": self.equivalent,
            "reason": self.reason,
            "ratio_residual": self.ratio_residual,
        }
        if pair_id is not None:
            out = {"pair_id": pair_id, **out}
        return out


def ratio_identity_residual(spec1: SubspaceSpec, spec2: SubspaceSpec) -> float:
    """Normalized defect of sigma_2^2 (1+||g_1||^2) = sigma_1^2 (1+||g_2||^2)."""
    lhs = spec2.sigma**2 * (1.0 + spec1.g_norm_sq)
    rhs = spec1.sigma**2 * (1.0 + spec2.g_norm_sq)
    return abs(lhs - rhs) / max(lhs, rhs)


def classify_equivalence(
    spec1: SubspaceSpec,
    p1: BrownianShiftParams | None,
    spec2: SubspaceSpec,
    p2: BrownianShiftParams | None,
    tol_theta: float = 1e-9,
    tol_ratio: float = 1e-6,
    check_invariance: bool = True,
) -> EquivalenceVerdict:
    """Decide unitary equivalence of the two restricted shifts.

    Both Type I restrictions are always equivalent; mixed types never are
    (the restricted norms are 1 versus sqrt(1 + sigma^2/(1+||g||^2)) > 1);
    two Type II restrictions are equivalent exactly when the angles agree
    and the covariance/norm ratio identity holds within ``tol_ratio``.
    """
    p1 = p1 if p1 is not None else (spec1.params if spec1.is_type2 else None)
    p2 = p2 if p2 is not None else (spec2.params if spec2.is_type2 else None)
    if check_invariance:
        for spec, p in ((spec1, p1), (spec2, p2)):
            if p is None:
                continue
            res = invariance_residual(spec, p)
            if res > 1e-6:
                raise ContractViolation(
                    f"subspace is not invariant under the given shift "
                    f"(residual {res:.3e})"
                )
    if not spec1.is_type2 and not spec2.is_type2:
        return EquivalenceVerdict(True, "both_type_I", 0.0)
    if spec1.is_type2 != spec2.is_type2:
        return EquivalenceVerdict(False, "type_mismatch", 0.0)
    gap = angle_gap(spec1.theta, spec2.theta)
    if gap >= tol_theta:
        return EquivalenceVerdict(False, "angle_mismatch", 0.0, theta_gap=gap)
    residual = ratio_identity_residual(spec1, spec2)
    if residual >= tol_ratio:
        return EquivalenceVerdict(False, "ratio_mismatch", residual, theta_gap=gap)
    return EquivalenceVerdict(True, "type_II_match", residual, theta_gap=gap)


# ---------------------------------------------------------------------------
# the constructive unitary
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """Unitary between two invariant subspaces in basis coordinates.

    ``matrix`` maps coordinates in the canonical basis of the domain to
    coordinates in the canonical basis of the codomain; the bases share
    the phi-block size, so the matrix is square.
    """

    matrix: np.ndarray
    domain_spec: SubspaceSpec
    codomain_spec: SubspaceSpec
    domain_basis: np.ndarray
    codomain_basis: np.ndarray

    def ambient_matrix(self) -> np.ndarray:
        """Ambient realization B2 @ U @ pinv(B1) (maps the subspace, kills
        its orthocomplement)."""
        return self.codomain_basis @ self.matrix @ np.linalg.pinv(self.domain_basis)

    def isometry_residual(self) -> float:
        """Max-abs deviation of Gram(B2 U) from Gram(B1): zero for an exact
        subspace isometry."""
        mapped = self.codomain_basis @ self.matrix
        gram_out = mapped.conj().T @ mapped
        gram_in = self.domain_basis.conj().T @ self.domain_basis
        return float(np.max(np.abs(gram_out - gram_in)))

    def intertwining_residual(
        self,
        p1: BrownianShiftParams | None = None,
        p2: BrownianShiftParams | None = None,
    ) -> float:
        """Spectral norm of U B1|M1 - B2|M2 U on the guarded basis columns."""
        s1, s2 = self.domain_spec, self.codomain_spec
        p1 = p1 if p1 is not None else (s1.params if s1.is_type2 else BrownianShiftParams(1.0, 0.0))
        p2 = p2 if p2 is not None else (s2.params if s2.is_type2 else BrownianShiftParams(1.0, 0.0))
        b1, b2 = self.domain_basis, self.codomain_basis
        a1 = truncated_matrix(p1, s1.trunc).entries
        a2 = truncated_matrix(p2, s2.trunc).entries
        images = a1 @ b1[:, :-1]
        coords, *_ = np.linalg.lstsq(b1, images, rcond=None)
        lhs = b2 @ (self.matrix @ coords)
        rhs = a2 @ (b2 @ self.matrix[:, :-1])
        return float(np.linalg.norm(lhs - rhs, ord=2))


def build_intertwiner(
    spec1: SubspaceSpec,
    p1: BrownianShiftParams | None,
    spec2: SubspaceSpec,
    p2: BrownianShiftParams | None,
    tol_theta: float = 1e-9,
    tol_ratio: float = 1e-6,
) -> Intertwiner:
    """Construct the canonical unitary witnessing equivalence.

    Type I pairs: z^k phi_1 goes to z^k phi_2 (identity in coordinates).
    Type II pairs: the g direction is scaled by
    (sigma_1/sigma_2) sqrt((1+||g_2||^2)/(1+||g_1||^2)) (equal to 1 on the
    equivalence locus) and the phi block by mu_2 / mu_1.  Raises
    ``ContractViolation`` when the classifier rejects the pair.
    """
    verdict = classify_equivalence(
        spec1, p1, spec2, p2, tol_theta=tol_theta, tol_ratio=tol_ratio
    )
    if not verdict.equivalent:
        raise ContractViolation(
            f"restrictions are not unitarily equivalent ({verdict.reason})"
        )
    if spec1.trunc != spec2.trunc:
        raise DimensionMismatch("specs must share a truncation order")
    size = min(spec1.block_size, spec2.block_size)
    b1 = basis_matrix(spec1, size)
    b2 = basis_matrix(spec2, size)
    if spec1.is_type2:
        lam = (spec1.sigma / spec2.sigma) * math.sqrt(
            (1.0 + spec2.g_norm_sq) / (1.0 + spec1.g_norm_sq)
        )
        phase = spec2.mu_phi / spec1.mu_phi
        diag = np.full(size + 1, phase, dtype=np.complex128)
        diag[0] = lam
        u = np.diag(diag)
    else:
        u = np.eye(size, dtype=np.complex128)
    return Intertwiner(u, spec1, spec2, b1, b2)


# ---------------------------------------------------------------------------
# restriction as a matrix, and its reduction
# ---------------------------------------------------------------------------


def restricted_matrix(
    spec: SubspaceSpec, size: int | None = None, realization: str = "auto"
) -> np.ndarray:
    """Matrix of the restricted shift on an orthonormal basis of the
    (truncated) subspace.

    ``coefficient`` compresses the dense truncation onto the QR
    orthonormalization of the numeric basis (fully honest, accurate when
    coefficient tails are negligible).  ``canonical`` writes the matrix in
    the exact canonical orthonormal basis, whose Gram is the identity by
    inner-function theory; the only numerical input is ||g||^2.  ``auto``
    picks ``canonical`` exactly when a singular atom makes coefficient
    tails heavy.
    """
    if size is None:
        size = min(spec.block_size, 48)
    if realization == "auto":
        realization = "canonical" if has_atomic_factor(spec.phi) else "coefficient"
    extra = 1 if spec.is_type2 else 0
    if realization == "coefficient":
        bm = basis_matrix(spec, size)
        q, _ = np.linalg.qr(bm)
        p = spec.params if spec.is_type2 else BrownianShiftParams(1.0, 0.0)
        a = truncated_matrix(p, spec.trunc).entries
        return q.conj().T @ (a @ q)
    if realization == "canonical":
        m = np.zeros((size + extra, size + extra), dtype=np.complex128)
        for k in range(size - 1):
            m[extra + k + 1, extra + k] = 1.0
        if spec.is_type2:
            m[0, 0] = cmath.exp(1j * spec.theta)
            m[1, 0] = spec.sigma * spec.mu_phi / math.sqrt(1.0 + spec.g_norm_sq)
        return m
    raise DomainError(f"unknown realization {realization!r}")


def restricted_norm(spec: SubspaceSpec, size: int | None = None) -> float:
    """Operator norm of the restricted shift: 1 for Type I, and
    sqrt(1 + sigma^2/(1+||g||^2)) for Type II."""
    m = restricted_matrix(spec, size)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def reduce_restriction(
    spec: SubspaceSpec, p: BrownianShiftParams | None = None
) -> BrownianShiftParams:
    """Parameters of the shift unitarily equivalent to the restriction to a
    Type II subspace: covariance sigma / sqrt(1 + ||g||^2), same angle."""
    if not spec.is_type2:
        raise ContractViolation("restriction reduction applies to Type II subspaces")
    if p is not None and (
        abs(p.sigma - spec.sigma) > 1e-12 or angle_gap(p.theta, spec.theta) > 1e-12
    ):
        raise ContractViolation("subspace is not invariant under the given shift")
    return BrownianShiftParams(
        spec.sigma / math.sqrt(1.0 + spec.g_norm_sq), spec.theta
    )


def restriction_spectrum_gap(spec: SubspaceSpec, size: int = 48) -> float:
    """Max elementwise gap between the sorted singular values of the
    restricted matrix and of the reduced-parameter truncation."""
    m = restricted_matrix(spec, size)
    reduced = reduce_restriction(spec)
    k = m.shape[0] - 1
    a = truncated_matrix(reduced, k).entries
    sv1 = np.sort(np.linalg.svd(m, compute_uv=False))
    sv2 = np.sort(np.linalg.svd(a, compute_uv=False))
    return float(np.max(np.abs(sv1 - sv2)))
