"""Power growth and normalized-power decay of the Brownian shift.

The shift is never power bounded: the m-th power applied to the slot
vector (0, 1) has squared norm 1 + m sigma^2.  Dividing the operator by
its norm sqrt(1 + sigma^2) produces a contraction whose forward and
adjoint powers both converge strongly to zero, at explicit rates:

    forward:  ||Bt^n u||^2  = (|c_0|^2 (1 + n sigma^2) + sum_{k>=1} |c_k|^2)
                              / (1 + sigma^2)^n
              <= (||u||^2 + n |c_0|^2 sigma^2) / (1 + sigma^2)^n
    adjoint:  ||Bt*^n u||^2 <= ||u||^2 (2 + n sigma^2) / (1 + sigma^2)^n

where c_0 is the scalar slot of u and c_{k+1} its Taylor coefficients.
All checks here are exact coefficient arithmetic on the truncation: no
quadrature is involved, so tolerances are pure floating point.

Note on small covariance: the secondary estimate that turns the bounds
into an O(1/n) envelope carries a 2/sigma^4 factor and blows up as
sigma -> 0, so convergence certificates are computed from measured norms
(and the primary bounds above), never from that envelope; for tiny sigma
the certified step count simply grows like log(1/eps)/log(1+sigma^2).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationOverflow
from .hardy import DEFAULT_TRUNC
from .shift import BrownianShiftParams, BrownianVector, apply, apply_adjoint


@dataclass(frozen=True, eq=False)
class DecayReport:
    """Measured norms of normalized powers next to the closed-form bound.

    ``measured`` and ``bound`` are norms (square roots of the squared-norm
    expressions above); ``satisfied`` records measured <= bound + 1e-12
    at every step.
    """

    n_values: np.ndarray
    measured: np.ndarray
    bound: np.ndarray
    satisfied: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "measured", "bound"])
        for n, m, b in zip(self.n_values, self.measured, self.bound):
            writer.writerow([int(n), repr(float(m)), repr(float(b))])
        return buf.getvalue()


def power_norm_growth(
    p: BrownianShiftParams, m_max: int, trunc: int = DEFAULT_TRUNC
) -> np.ndarray:
    """Squared norms ||B^m (0,1)||^2 for m = 1..m_max; equals 1 + m sigma^2."""
    if m_max >= trunc:
        raise TruncationOverflow(f"m_max {m_max} must stay below truncation {trunc}")
    v = BrownianVector.slot(trunc)
    out = np.empty(m_max, dtype=float)
    for m in range(1, m_max + 1):
        v = apply(p, v)
        out[m - 1] = v.norm_sq
    return out


def _decay(p, u, n_max, trunc, step, bound_sq):
    if u.order != trunc:
        raise TruncationOverflow("vector truncation does not match requested order")
    if u.degree() + n_max >= trunc:
        raise TruncationOverflow(
            f"degree {u.degree()} plus {n_max} steps exceeds truncation {trunc}"
        )
    scale = math.sqrt(1.0 + p.sigma**2)
    ns = np.arange(1, n_max + 1)
    measured = np.empty(n_max, dtype=float)
    v = u
    for i, n in enumerate(ns):
        v = step(p, v)
        measured[i] = v.norm / scale**n
    bound = np.sqrt(bound_sq(ns))
    satisfied = bool(np.all(measured <= bound + 1e-12))
    return DecayReport(ns, measured, bound, satisfied)


def c00_forward_decay(
    p: BrownianShiftParams,
    u: BrownianVector,
    n_max: int,
    trunc: int = DEFAULT_TRUNC,
) -> DecayReport:
    """Decay of ||Bt^n u|| against the forward bound."""
    c0_sq = abs(u.scalar) ** 2
    u_sq = u.norm_sq

    def bound_sq(ns):
        return (u_sq + ns * c0_sq * p.sigma**2) / (1.0 + p.sigma**2) ** ns

    return _decay(p, u, n_max, trunc, apply, bound_sq)


def c00_adjoint_decay(
    p: BrownianShiftParams,
    u: BrownianVector,
    n_max: int,
    trunc: int = DEFAULT_TRUNC,
) -> DecayReport:
    """Decay of ||Bt*^n u|| against the adjoint bound ||u||^2 (2 + n sigma^2)
    over (1 + sigma^2)^n."""
    u_sq = u.norm_sq

    def bound_sq(ns):
        return u_sq * (2.0 + ns * p.sigma**2) / (1.0 + p.sigma**2) ** ns

    return _decay(p, u, n_max, trunc, apply_adjoint, bound_sq)


def adjoint_power_norm_closed_form(
    p: BrownianShiftParams, n: int, k: int | None = None
) -> float:
    """Exact ||Bt*^n u|| for the basis families.

    k is None for u = (0, 1); otherwise u = (z^k, 0).  The three regimes:
    slot and k >= n give (1+sigma^2)^(-n/2); 0 <= k < n picks up a factor
    sigma from the slot coupling.
    """
    if n < 1:
        raise DomainError("power must be positive")
    base = (1.0 + p.sigma**2) ** (-n / 2.0)
    if k is None or k >= n:
        return base
    return p.sigma * base


def sot_convergence_certificate(
    p: BrownianShiftParams,
    basis_size: int,
    n_max: int,
    eps: float,
    trunc: int = DEFAULT_TRUNC,
) -> dict:
    """Smallest n with max over the first ``basis_size`` basis vectors of
    both ||Bt^n b|| and ||Bt*^n b|| below eps.

    Returns {"certified_n": n or None, "max_norm": value at the certified
    step (or at n_max when none), "n_max": n_max}.  The basis family is
    (0,1) and (z^k, 0) for k < basis_size - 1.
    """
    if basis_size + n_max >= trunc:
        raise TruncationOverflow("basis size plus horizon exceeds truncation")
    scale = math.sqrt(1.0 + p.sigma**2)
    fwd = [BrownianVector.slot(trunc)] + [
        BrownianVector.monomial(k, trunc) for k in range(basis_size - 1)
    ]
    adj = list(fwd)
    last = math.inf
    for n in range(1, n_max + 1):
        fwd = [apply(p, v) for v in fwd]
        adj = [apply_adjoint(p, v) for v in adj]
        last = max(max(v.norm for v in fwd), max(v.norm for v in adj)) / scale**n
        if last < eps:
            return {"certified_n": n, "max_norm": last, "n_max": n_max}
    return {"certified_n": None, "max_norm": last, "n_max": n_max}
