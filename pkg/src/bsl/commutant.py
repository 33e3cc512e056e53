"""Numerical irreducibility evidence: joint orbits and commutant dimension.

The Brownian shift has no nontrivial reducing subspace.  Two finite
witnesses are computed here:

* ``joint_orbit_span`` grows a subspace from a start vector, closed under
  the shift and its adjoint.  The growth mirrors the exact argument: the
  slot vector (0, 1) appears after one B*B step, then (1, 0) after one
  more adjoint-and-phase move, then every monomial (z^n, 0) by forward
  shifts, so any reducing subspace containing a nonzero vector is
  everything.  A full certificate at truncation N is evidence, not proof.

* ``commutant_dimension`` counts the solutions of X A = A X, X A* = A* X
  on the truncation via the null space of the stacked Sylvester system
  (irreducible means only scalars commute with both).  The sigma-ablated
  control [[S, 0], [0, 1]] is visibly reducible and yields dimension 2,
  showing the test separates the two situations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .shift import (
    BrownianShiftParams,
    BrownianVector,
    apply,
    apply_adjoint,
    rank_one_decomposition,
    truncated_matrix,
)


@dataclass(frozen=True)
class OrbitCertificate:
    """Joint-orbit growth record for one start vector."""

    sigma: float
    theta: float
    trunc: int
    start_label: str
    steps: tuple
    reached_dimension: int
    full: bool

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "theta": self.theta,
            "N": self.trunc,
            "start": self.start_label,
            "reached": self.reached_dimension,
            "full": self.full,
        }


def joint_orbit_span(
    p: BrownianShiftParams,
    v: BrownianVector,
    rank_tol: float = 1e-10,
    start_label: str = "custom",
) -> OrbitCertificate:
    """Breadth-first growth of span{words in B, B* applied to v}.

    New directions are Gram-Schmidt orthogonalized (twice, for stability)
    against the current span and accepted when the remainder exceeds
    ``rank_tol`` times the image norm.  Stops when the whole truncated
    space (dimension N+1) is reached or no generator adds a direction.
    """
    if v.norm == 0:
        raise DomainError("orbit start vector must be nonzero")
    n = v.order
    full_dim = n + 1
    basis = np.empty((full_dim, full_dim), dtype=np.complex128)
    basis[:, 0] = v.to_array() / v.norm
    dim = 1
    steps: list[str] = []
    queue = [0]
    while queue and dim < full_dim:
        idx = queue.pop(0)
        vec = BrownianVector.from_array(basis[:, idx])
        for op, label in ((apply, "B"), (apply_adjoint, "B*")):
            image = op(p, vec).to_array()
            scale = np.linalg.norm(image)
            if scale == 0:
                continue
            for _ in range(2):
                image = image - basis[:, :dim] @ (basis[:, :dim].conj().T @ image)
            rem = np.linalg.norm(image)
            if rem > rank_tol * scale:
                basis[:, dim] = image / rem
                queue.append(dim)
                steps.append(label)
                dim += 1
                if dim == full_dim:
                    break
    return OrbitCertificate(
        p.sigma, p.theta, n, start_label, tuple(steps), dim, dim == full_dim
    )


def _joint_commutant_dimension(a: np.ndarray, rank_tol: float) -> int:
    """Dimension of {X : XA = AX, XA* = A*X} via the Hermitian normal
    matrix of the stacked Sylvester system.

    vec(XA - AX) = (A^T (x) I - I (x) A) vec(X); the null dimension is the
    count of eigenvalues of L1^H L1 + L2^H L2 whose square roots fall below
    ``rank_tol`` times the largest singular value.
    """
    m = a.shape[0]
    eye = np.eye(m)
    astar = a.conj().T
    l1 = np.kron(a.T, eye) - np.kron(eye, a)
    l2 = np.kron(astar.T, eye) - np.kron(eye, astar)
    normal = l1.conj().T @ l1 + l2.conj().T @ l2
    eigs = np.linalg.eigvalsh(normal)
    smax = np.sqrt(max(eigs[-1], 0.0))
    sv = np.sqrt(np.clip(eigs, 0.0, None))
    # squaring floors the resolvable singular value near sqrt(m eps ||H||)
    floor = np.sqrt(100.0 * m * np.finfo(float).eps * max(eigs[-1], 1.0))
    return int(np.sum(sv <= max(rank_tol * smax, floor)))


def commutant_dimension(
    p: BrownianShiftParams, trunc: int = 32, rank_tol: float = 1e-10
) -> int:
    """Dimension of the joint commutant of the truncated shift and its
    adjoint; 1 is the irreducibility witness (identity always counts)."""
    if trunc > 128:
        raise DomainError("dense commutant solve is desk scale only (N <= 128)")
    a = truncated_matrix(p, trunc).entries
    return _joint_commutant_dimension(a, rank_tol)


def ablated_commutant_dimension(
    p: BrownianShiftParams, trunc: int = 32, rank_tol: float = 1e-10
) -> int:
    """Commutant dimension of the reducible control: the isometric part of
    the rank-one decomposition (coupling removed).  Expected >= 2."""
    iso, _ = rank_one_decomposition(p, trunc)
    return _joint_commutant_dimension(iso.entries, rank_tol)
