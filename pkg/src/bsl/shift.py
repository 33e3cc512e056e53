"""The Brownian shift on H^2 (+) C: action, adjoint, powers, norm, and
finite truncations.

The operator with covariance sigma > 0 and angle theta acts on pairs
(f, alpha) of an H^2 element and a scalar by

    (f, alpha)  |->  (z f + sigma * alpha,  exp(1j*theta) * alpha),

i.e. the block matrix [[S, sigma (1 (x) 1)], [0, exp(1j*theta)]] with S the
unilateral shift.  Its adjoint sends (f, alpha) to
(S* f, sigma * f_0 + exp(-1j*theta) * alpha).

Truncation convention: multiplication by z on a degree-< N truncation
drops the top coefficient (compression to the truncated space), so every
identity involving isometric action is exact on the degree-< N-1 subspace
where no drop occurs.  Matrices are written in the ordered basis
z^0, ..., z^{N-1}, then the scalar slot last.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, TruncationOverflow
from .hardy import DEFAULT_TRUNC, HardyVector, wrap_angle


@dataclass(frozen=True)
class BrownianShiftParams:
    """Covariance sigma > 0 and angle theta (normalized to [0, 2*pi))."""

    sigma: float
    theta: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"covariance must be positive, got {self.sigma}")
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def unit(self) -> complex:
        """exp(1j*theta)."""
        return cmath.exp(1j * self.theta)

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "theta": self.theta}

    @classmethod
    def from_dict(cls, data: dict) -> "BrownianShiftParams":
        return cls(sigma=data["sigma"], theta=data["theta"])


@dataclass(frozen=True, eq=False)
class BrownianVector:
    """Element of H^2 (+) C: a truncated analytic part plus one scalar slot."""

    analytic: HardyVector
    scalar: complex = 0.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "scalar", complex(self.scalar))

    @property
    def order(self) -> int:
        return self.analytic.order

    @property
    def norm_sq(self) -> float:
        return self.analytic.norm_sq + abs(self.scalar) ** 2

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def inner(self, other: "BrownianVector") -> complex:
        return self.analytic.inner(other.analytic) + self.scalar * other.scalar.conjugate()

    def to_array(self) -> np.ndarray:
        """Ambient coordinates of length N+1, scalar slot last."""
        out = np.empty(self.order + 1, dtype=np.complex128)
        out[:-1] = self.analytic.coeffs
        out[-1] = self.scalar
        return out

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BrownianVector":
        arr = np.asarray(arr, dtype=np.complex128)
        return cls(HardyVector(arr[:-1]), complex(arr[-1]))

    @classmethod
    def slot(cls, order: int) -> "BrownianVector":
        """The vector (0, 1)."""
        return cls(HardyVector(np.zeros(order, dtype=np.complex128)), 1.0)

    @classmethod
    def monomial(cls, k: int, order: int) -> "BrownianVector":
        """The vector (z^k, 0)."""
        c = np.zeros(order, dtype=np.complex128)
        c[k] = 1.0
        return cls(HardyVector(c), 0.0)

    def degree(self) -> int:
        """Index of the last nonzero analytic coefficient, -1 for zero."""
        nz = np.nonzero(self.analytic.coeffs)[0]
        return int(nz[-1]) if nz.size else -1


def apply(p: BrownianShiftParams, v: BrownianVector) -> BrownianVector:
    """(f, alpha) |-> (z f + sigma alpha, exp(1j*theta) alpha)."""
    shifted = v.analytic.shift().coeffs.copy()
    shifted[0] += p.sigma * v.scalar
    return BrownianVector(HardyVector(shifted), p.unit * v.scalar)


def apply_adjoint(p: BrownianShiftParams, v: BrownianVector) -> BrownianVector:
    """(f, alpha) |-> (S* f, sigma f_0 + exp(-1j*theta) alpha)."""
    c = v.analytic.coeffs
    out = np.empty_like(c)
    out[:-1] = c[1:]
    out[-1] = 0.0
    return BrownianVector(
        HardyVector(out), p.sigma * c[0] + p.unit.conjugate() * v.scalar
    )


def power_apply(p: BrownianShiftParams, m: int, v: BrownianVector) -> BrownianVector:
    """m-fold application of the shift; raises ``TruncationOverflow`` when the
    exact image would need coefficients beyond the truncation."""
    if m < 1:
        raise DomainError("power must be a positive integer")
    top = v.degree()
    if v.scalar != 0 and m - 1 >= v.order:
        # the slot feeds degree m-1 after m steps
        raise TruncationOverflow(
            f"power {m} of the slot vector needs degree {m - 1} >= {v.order}"
        )
    if top >= 0 and top + m >= v.order:
        raise TruncationOverflow(
            f"degree {top} plus power {m} exceeds truncation {v.order}"
        )
    out = v
    for _ in range(m):
        out = apply(p, out)
    return out


def slot_power_closed_form(p: BrownianShiftParams, m: int, order: int) -> BrownianVector:
    """Closed form of the m-th power applied to (0, 1):
    (sigma * sum_{k<m} exp(1j*k*theta) z^{m-k-1}, exp(1j*m*theta))."""
    if not 1 <= m <= order:
        raise TruncationOverflow(f"power {m} outside truncation {order}")
    c = np.zeros(order, dtype=np.complex128)
    for k in range(m):
        c[m - k - 1] = p.sigma * cmath.exp(1j * k * p.theta)
    return BrownianVector(HardyVector(c), cmath.exp(1j * m * p.theta))


# ---------------------------------------------------------------------------
# dense truncation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense matrix of the shift (or a derived operator) on the truncated
    space, basis z^0..z^{N-1} plus the scalar slot last."""

    entries: np.ndarray
    trunc: int

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128, copy=True)
        if m.shape != (self.trunc + 1, self.trunc + 1):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match truncation {self.trunc}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def adjoint_entries(self) -> np.ndarray:
        return self.entries.conj().T

    def apply_array(self, arr: np.ndarray) -> np.ndarray:
        return self.entries @ arr

    def to_csv(self) -> str:
        """Row-major CSV with quoted "re,im" cells."""
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\n")
        for row in self.entries:
            writer.writerow([f"{z.real!r},{z.imag!r}" for z in row])
        return buf.getvalue()


def truncated_matrix(p: BrownianShiftParams, n: int = DEFAULT_TRUNC) -> TruncatedOperator:
    """Matrix of the shift on the degree-< n truncation plus the slot."""
    if n < 2:
        raise DomainError("truncation must be at least 2")
    m = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n - 1):
        m[k + 1, k] = 1.0
    m[0, n] = p.sigma
    m[n, n] = p.unit
    return TruncatedOperator(m, n)


def rank_one_decomposition(
    p: BrownianShiftParams, n: int = DEFAULT_TRUNC
) -> tuple[TruncatedOperator, TruncatedOperator]:
    """Split the truncated shift as isometric part plus rank-one update:
    [[S, 0], [0, 1]]  +  [[0, sigma (1 (x) 1)], [0, exp(1j*theta) - 1]]."""
    iso = np.zeros((n + 1, n + 1), dtype=np.complex128)
    for k in range(n - 1):
        iso[k + 1, k] = 1.0
    iso[n, n] = 1.0
    rank1 = np.zeros((n + 1, n + 1), dtype=np.complex128)
    rank1[0, n] = p.sigma
    rank1[n, n] = p.unit - 1.0
    return TruncatedOperator(iso, n), TruncatedOperator(rank1, n)


def operator_norm(p: BrownianShiftParams) -> float:
    """Exact operator norm sqrt(1 + sigma^2), attained at (0, 1)."""
    return math.sqrt(1.0 + p.sigma**2)


def operator_norm_diagnostic(
    p: BrownianShiftParams,
    n: int = 128,
    *,
    seed: int = 0xB705,
    max_iter: int | None = None,
    tol: float = 1e-13,
) -> dict:
    """Largest singular value of the truncation by power iteration on A^H A,
    reported next to the closed-form norm.

    Returns a dict with keys ``formula``, ``estimate``, ``gap``,
    ``iterations`` and ``residual`` (the final power-iteration residual
    ||A^H A x - lam x||).
    """
    a = truncated_matrix(p, n).entries
    gram = a.conj().T @ a
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    x /= np.linalg.norm(x)
    cap = 10 * n if max_iter is None else max_iter
    lam = 0.0
    residual = math.inf
    iterations = 0
    for iterations in range(1, cap + 1):
        y = gram @ x
        norm_y = np.linalg.norm(y)
        if norm_y == 0:
            x = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            x /= np.linalg.norm(x)
            continue
        lam = float(np.real(np.vdot(x, y)))
        x = y / norm_y
        residual = float(np.linalg.norm(gram @ x - lam * x))
        if residual < tol * max(1.0, lam):
            break
    estimate = math.sqrt(max(lam, 0.0))
    formula = operator_norm(p)
    return {
        "formula": formula,
        "estimate": estimate,
        "gap": abs(estimate - formula),
        "iterations": iterations,
        "residual": residual,
    }
