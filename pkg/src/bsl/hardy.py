"""Truncated Hardy-space arithmetic and symbolic inner functions.

The Hardy space H^2 of the unit disc is modelled by its degree-< N Taylor
truncation: a vector of complex coefficients (c_0, ..., c_{N-1}) carrying
the l^2 inner product, so that ||f||^2 = sum |c_k|^2 equals the mean of
|f|^2 over the circle (Parseval).

Inner functions are kept *symbolic* rather than as coefficient arrays:

* ``BlaschkeProduct`` -- finite product of factors (z - a)/(1 - conj(a) z)
  with |a| < 1, times a unimodular constant ``exp(1j * const_angle)``.
* ``AtomicSingular`` -- exp(s (z + w)/(z - w)) with atom w = exp(1j * zeta)
  on the circle and mass s > 0.  Its modulus is exactly 1 everywhere on
  the circle except at the atom, where no radial limit exists.
* ``ProductInner`` -- finite product of the above.

Keeping the descriptor symbolic makes unimodular boundary values available
to machine precision; truncated coefficient vectors are derived on demand
by sampling on a circle of radius slightly below 1 and applying the FFT.
Atoms are detected by exact match of the stored atom angle, never by
numerical probing of radial limits.

Angles are radians; callers may pass any real value, comparisons are done
modulo 2*pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.integrate import quad

from .errors import (
    DimensionMismatch,
    DomainError,
    NonvanishingRoot,
    PrecisionLoss,
    UndefinedBoundaryValue,
)

TWO_PI = 2.0 * math.pi

#: default truncation order for the whole laboratory
DEFAULT_TRUNC = 256

#: half width of the excluded window around an atom in circle quadrature
ATOM_WINDOW = 3e-4


def wrap_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    return t + TWO_PI if t < 0 else t


def angle_gap(a: float, b: float) -> float:
    """Distance between two angles modulo 2*pi, in [0, pi]."""
    d = abs(wrap_angle(a) - wrap_angle(b))
    return min(d, TWO_PI - d)


# ---------------------------------------------------------------------------
# truncated H^2 vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HardyVector:
    """Degree-< N truncation of an H^2 element (complex Taylor coefficients)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("coefficient array must be one-dimensional and nonempty")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    def inner(self, other: "HardyVector") -> complex:
        """H^2 inner product <self, other> = sum self_k conj(other_k)."""
        if self.order != other.order:
            raise DimensionMismatch(
                f"truncation orders differ: {self.order} != {other.order}"
            )
        return complex(np.vdot(other.coeffs, self.coeffs))

    def shift(self) -> "HardyVector":
        """Multiply by z, dropping the top coefficient (compression)."""
        out = np.empty_like(self.coeffs)
        out[0] = 0.0
        out[1:] = self.coeffs[:-1]
        return HardyVector(out)

    def evaluate(self, z: complex) -> complex:
        """Value of the truncated series at z (Horner scheme)."""
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return complex(acc)

    def padded(self, order: int) -> "HardyVector":
        if order < self.order:
            raise DimensionMismatch("cannot pad to a smaller order")
        out = np.zeros(order, dtype=np.complex128)
        out[: self.order] = self.coeffs
        return HardyVector(out)

    def __add__(self, other: "HardyVector") -> "HardyVector":
        if self.order != other.order:
            raise DimensionMismatch("truncation orders differ")
        return HardyVector(self.coeffs + other.coeffs)

    def __sub__(self, other: "HardyVector") -> "HardyVector":
        if self.order != other.order:
            raise DimensionMismatch("truncation orders differ")
        return HardyVector(self.coeffs - other.coeffs)

    def scaled(self, factor: complex) -> "HardyVector":
        return HardyVector(self.coeffs * factor)


def h2_inner_product(f: HardyVector, g: HardyVector) -> complex:
    """Sesquilinear H^2 inner product of two equal-order truncations."""
    return f.inner(g)


def hardy_basis_vector(k: int, order: int) -> HardyVector:
    """The monomial z^k as a truncated vector."""
    if not 0 <= k < order:
        raise DomainError(f"monomial degree {k} outside truncation {order}")
    c = np.zeros(order, dtype=np.complex128)
    c[k] = 1.0
    return HardyVector(c)


# ---------------------------------------------------------------------------
# symbolic inner functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product: exp(1j*const_angle) * prod (z-a)/(1-conj(a)z).

    An empty zero tuple gives the unimodular constant; in particular the
    trivial inner function 1 is ``BlaschkeProduct()``.
    """

    zeros: tuple = ()
    const_angle: float = 0.0

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zeros)
        for a in zs:
            if abs(a) >= 1.0:
                raise DomainError(f"Blaschke zero {a} not inside the open disc")
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "const_angle", float(self.const_angle))


@dataclass(frozen=True)
class AtomicSingular:
    """Singular inner function exp(mass * (z + w)/(z - w)), w = exp(1j*atom_angle)."""

    atom_angle: float
    mass: float = 1.0

    def __post_init__(self):
        if self.mass <= 0:
            raise DomainError("atomic mass must be positive")
        object.__setattr__(self, "atom_angle", wrap_angle(self.atom_angle))
        object.__setattr__(self, "mass", float(self.mass))


@dataclass(frozen=True)
class ProductInner:
    """Finite product of inner-function factors."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(self.factors)
        if not fs:
            raise DomainError("product needs at least one factor")
        object.__setattr__(self, "factors", fs)


InnerFunction = Union[BlaschkeProduct, AtomicSingular, ProductInner]


def atom_angles(phi: InnerFunction) -> tuple:
    """Angles of all boundary atoms of ``phi`` (exact stored values)."""
    if isinstance(phi, AtomicSingular):
        return (phi.atom_angle,)
    if isinstance(phi, ProductInner):
        out = []
        for f in phi.factors:
            out.extend(atom_angles(f))
        return tuple(out)
    return ()


def has_atomic_factor(phi: InnerFunction) -> bool:
    """True when any factor is a singular atom; such functions have slowly
    decaying Taylor coefficients and need quadrature-based norms."""
    return len(atom_angles(phi)) > 0


def inner_eval(phi: InnerFunction, z: complex, *, _rim_tol: float = 1e-12) -> complex:
    """Evaluate an inner function at z with |z| <= 1.

    On the circle the value is the (unimodular) boundary value; evaluation
    at an atom of a singular factor raises ``UndefinedBoundaryValue``, and
    |z| > 1 raises ``DomainError``.
    """
    z = complex(z)
    if abs(z) > 1.0 + _rim_tol:
        raise DomainError(f"evaluation point {z} outside the closed disc")
    if isinstance(phi, BlaschkeProduct):
        val = cmath.exp(1j * phi.const_angle)
        for a in phi.zeros:
            val *= (z - a) / (1.0 - a.conjugate() * z)
        return val
    if isinstance(phi, AtomicSingular):
        w = cmath.exp(1j * phi.atom_angle)
        if abs(z) >= 1.0 - _rim_tol:
            # snap to the circle so the Moebius image stays near the
            # imaginary axis and exp does not overflow off the atom
            z = z / abs(z)
            if z == w or angle_gap(cmath.phase(z), phi.atom_angle) == 0.0:
                raise UndefinedBoundaryValue(
                    f"no radial limit at the atom angle {phi.atom_angle}"
                )
        return cmath.exp(phi.mass * (z + w) / (z - w))
    if isinstance(phi, ProductInner):
        val = 1.0 + 0.0j
        for f in phi.factors:
            val *= inner_eval(f, z)
        return val
    raise TypeError(f"not an inner function descriptor: {phi!r}")


@dataclass(frozen=True)
class BoundaryValue:
    """Radial boundary limit of an inner function; unit modulus when defined."""

    defined: bool
    value: complex = 0.0 + 0.0j


def boundary_value(phi: InnerFunction, theta: float) -> BoundaryValue:
    """Boundary value of ``phi`` at exp(1j*theta).

    Undefined exactly when theta coincides with a stored atom angle; finite
    Blaschke products have boundary values everywhere on the circle.
    """
    theta = wrap_angle(theta)
    for zeta in atom_angles(phi):
        if angle_gap(theta, zeta) == 0.0:
            return BoundaryValue(False)
    return BoundaryValue(True, inner_eval(phi, cmath.exp(1j * theta)))


# ---------------------------------------------------------------------------
# Taylor coefficient extraction
# ---------------------------------------------------------------------------


def _eval_array(phi: InnerFunction, z: np.ndarray) -> np.ndarray:
    """Vectorized interior evaluation (callers guarantee |z| < 1)."""
    if isinstance(phi, BlaschkeProduct):
        val = np.full(z.shape, cmath.exp(1j * phi.const_angle), dtype=np.complex128)
        for a in phi.zeros:
            val *= (z - a) / (1.0 - a.conjugate() * z)
        return val
    if isinstance(phi, AtomicSingular):
        w = cmath.exp(1j * phi.atom_angle)
        return np.exp(phi.mass * (z + w) / (z - w))
    if isinstance(phi, ProductInner):
        val = np.ones(z.shape, dtype=np.complex128)
        for f in phi.factors:
            val *= _eval_array(f, z)
        return val
    raise TypeError(f"not an inner function descriptor: {phi!r}")


def _fft_taylor(phi: InnerFunction, n: int, radius: float, grid: int) -> np.ndarray:
    theta = TWO_PI * np.arange(grid) / grid
    values = _eval_array(phi, radius * np.exp(1j * theta))
    c = np.fft.fft(values) / grid
    return c[:n] / radius ** np.arange(n)


def taylor_coefficients(
    phi: InnerFunction,
    n: int,
    *,
    agreement_tol: float = 1e-9,
    max_grid: int = 1 << 20,
) -> HardyVector:
    """First ``n`` Taylor coefficients of an inner function at 0.

    Samples on circles of radius exp(-2/n) and exp(-4/n) (so roundoff is
    amplified by at most e^4 while aliasing stays below e^-60 for any
    function bounded by 1) and requires the two rescaled FFT extractions to
    agree.  Disagreement beyond ``agreement_tol`` after grid refinement
    raises ``PrecisionLoss`` carrying the residual.
    """
    if n < 1:
        raise DomainError("order must be at least 1")
    grid = max(32 * n, 256)
    r1 = math.exp(-2.0 / n)
    r2 = math.exp(-4.0 / n)
    residual = math.inf
    while grid <= max_grid:
        c1 = _fft_taylor(phi, n, r1, grid)
        c2 = _fft_taylor(phi, n, r2, grid)
        residual = float(np.max(np.abs(c1 - c2)))
        if residual <= agreement_tol:
            return HardyVector(c1)
        grid *= 4
    raise PrecisionLoss("dual-radius Taylor extraction did not converge", residual)


# ---------------------------------------------------------------------------
# circle quadrature
# ---------------------------------------------------------------------------


def circle_norm_squared(
    sampler: Callable[[float], complex],
    method: str = "uniform",
    tol: float = 1e-10,
    *,
    max_grid: int = 1 << 20,
    split_points: tuple = (),
) -> float:
    """Mean of |sampler|^2 over the circle: (1/2pi) Int_0^2pi |f(theta)|^2.

    ``uniform`` doubles a trapezoid grid until successive estimates agree
    within ``tol`` (spectrally accurate for smooth periodic integrands);
    ``adaptive`` delegates to Gauss-Kronrod subdivision, optionally split
    at the given interior points.  Both raise ``PrecisionLoss`` when the
    tolerance cannot be certified.
    """
    if method == "uniform":
        grid = 512
        prev = math.inf
        est = math.inf
        while grid <= max_grid:
            theta = TWO_PI * np.arange(grid) / grid
            vals = np.array([abs(sampler(t)) ** 2 for t in theta], dtype=float)
            est = float(np.mean(vals))
            if abs(est - prev) <= tol * max(1.0, abs(est)):
                return est
            prev = est
            grid *= 2
        raise PrecisionLoss("uniform circle quadrature did not converge", abs(est - prev))
    if method == "adaptive":
        breaks = sorted({0.0, TWO_PI, *(wrap_angle(p) for p in split_points)})
        total = 0.0
        err = 0.0
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            if hi - lo < 1e-15:
                continue
            val, e = quad(
                lambda t: abs(sampler(t)) ** 2, lo, hi, limit=4000,
                epsabs=tol, epsrel=tol,
            )
            total += val
            err += e
        if err > 100 * tol * max(1.0, abs(total)):
            raise PrecisionLoss("adaptive circle quadrature error too large", err)
        return total / TWO_PI
    raise DomainError(f"unknown quadrature method {method!r}")


# ---------------------------------------------------------------------------
# division by a boundary root and the subspace function g
# ---------------------------------------------------------------------------


def divide_by_boundary_root(
    h: HardyVector, theta: float, root_tol: float | None = 1e-8
) -> HardyVector:
    """Quotient q with h = (z - exp(1j*theta)) * q, via the forward recurrence
    q_0 = -conj(w) h_0, q_k = conj(w)(q_{k-1} - h_k).

    Multiplying back reproduces h exactly on the truncation; the only loss
    is a single spill-over coefficient at degree N equal in modulus to the
    boundary residual |h(w)| of the truncated series.  When ``root_tol`` is
    not None, |h(w)| > root_tol * ||h|| raises ``NonvanishingRoot``.
    """
    w = cmath.exp(1j * wrap_angle(theta))
    if root_tol is not None:
        residual = abs(h.evaluate(w))
        scale = max(h.norm, 1e-300)
        if residual > root_tol * scale:
            raise NonvanishingRoot(
                f"dividend has boundary residual {residual:.3e} at angle {theta}"
            )
    wbar = w.conjugate()
    c = h.coeffs
    q = np.empty_like(c)
    q[0] = -wbar * c[0]
    for k in range(1, c.size):
        q[k] = wbar * (q[k - 1] - c[k])
    return HardyVector(q)


def make_g(
    phi: InnerFunction, theta: float, sigma: float, n: int = DEFAULT_TRUNC
) -> HardyVector:
    """The model-space function g = sigma (conj(phi(w)) phi - 1)/(z - w) at
    w = exp(1j*theta), as a degree-< n truncation.

    The numerator vanishes at w by construction (checked on the symbolic
    boundary value, which is exact); the coefficient-level boundary
    residual of the truncation is itself only tail-sized for singular
    atoms, so the root gate is not applied to it.
    """
    if sigma <= 0:
        raise DomainError("covariance must be positive")
    bv = boundary_value(phi, theta)
    if not bv.defined:
        raise UndefinedBoundaryValue(
            f"inner function has no boundary value at angle {theta}"
        )
    mu = bv.value.conjugate()
    if abs(mu * bv.value - 1.0) > 1e-9:
        raise PrecisionLoss("boundary value lost unimodularity", abs(mu * bv.value - 1.0))
    h = taylor_coefficients(phi, n).coeffs * mu
    h[0] -= 1.0
    q = divide_by_boundary_root(HardyVector(h), theta, root_tol=None)
    return q.scaled(sigma)


def g_norm_squared_quadrature(
    phi: InnerFunction,
    theta: float,
    sigma: float,
    tol: float = 1e-9,
    *,
    window: float = ATOM_WINDOW,
) -> float:
    """||g||^2 by circle quadrature of the symbolic boundary values.

    Around each atom of ``phi`` the integrand oscillates without limit; a
    window of half-width ``window`` is excluded there and its mass is
    restored by integrating the smooth envelope 2 sigma^2 / |e^{it}-w|^2
    (the oscillating factor |conj(phi(w))phi - 1|^2 averages to 2, with an
    O(window^2/mass) van der Corput remainder).
    """
    theta = wrap_angle(theta)
    bv = boundary_value(phi, theta)
    if not bv.defined:
        raise UndefinedBoundaryValue("no boundary value at the division angle")
    mu = bv.value.conjugate()
    w = cmath.exp(1j * theta)

    def integrand(t: float) -> float:
        z = cmath.exp(1j * t)
        return abs((mu * inner_eval(phi, z) - 1.0) / (z - w)) ** 2

    # atoms at the same stored angle merge (the envelope mean is mass-free)
    atoms = sorted({wrap_angle(a) for a in atom_angles(phi)})
    if not atoms:
        return sigma**2 * circle_norm_squared(
            lambda t: (mu * inner_eval(phi, cmath.exp(1j * t)) - 1.0)
            / (cmath.exp(1j * t) - w),
            method="uniform",
            tol=tol,
        )
    for zeta in atoms:
        if angle_gap(zeta, theta) < 10 * window:
            raise DomainError(
                "division angle too close to an atom window for quadrature"
            )
    for za, zb in zip(atoms, atoms[1:] + [atoms[0] + TWO_PI]):
        if 0 < zb - za < 2 * window:
            raise DomainError("atom windows overlap; reduce the window width")

    # intervals between atom windows, split at the removable point theta
    pieces = []
    lo = atoms[0] + window
    for nxt in atoms[1:] + [atoms[0] + TWO_PI]:
        hi = nxt - window
        if hi > lo:
            pieces.append((lo, hi))
        lo = nxt + window
    total = 0.0
    for a, b in pieces:
        cuts = sorted({a, b, *(th for th in (theta, theta + TWO_PI) if a < th < b)})
        for x0, x1 in zip(cuts[:-1], cuts[1:]):
            val, _ = quad(integrand, x0, x1, limit=6000, epsabs=tol, epsrel=tol)
            total += val

    def envelope(t: float) -> float:
        return 2.0 / abs(cmath.exp(1j * t) - w) ** 2

    # restore the mass excluded around each atom via the smooth envelope
    for zeta in atoms:
        val, _ = quad(envelope, zeta - window, zeta + window, limit=200)
        total += val
    return sigma**2 * total / TWO_PI


def g_norm_squared(
    phi: InnerFunction, theta: float, sigma: float, n: int = DEFAULT_TRUNC
) -> float:
    """Accurate ||g||^2: Parseval sum of the truncation for tail-light inner
    functions, windowed quadrature when a singular atom is present."""
    if has_atomic_factor(phi):
        return g_norm_squared_quadrature(phi, theta, sigma)
    return make_g(phi, theta, sigma, n).norm_sq


# ---------------------------------------------------------------------------
# model space projection
# ---------------------------------------------------------------------------


def model_space_project(f: HardyVector, phi: InnerFunction) -> HardyVector:
    """Orthogonal projection of f onto K_phi = H^2 (-) phi H^2, computed as
    f - phi * P_plus(conj(phi) f) on the truncation.

    With U the upper-Toeplitz matrix of conj(phi) the implemented operator
    is I - U^H U, which is self-adjoint by construction and idempotent up
    to the coefficient tail of phi beyond the truncation.
    """
    n = f.order
    phi_c = taylor_coefficients(phi, n).coeffs
    # P_plus(conj(phi) f): nonnegative Fourier modes of the product
    u = np.correlate(f.coeffs, phi_c, mode="full")[n - 1:]
    v = np.convolve(phi_c, u)[:n]
    return HardyVector(f.coeffs - v)


# ---------------------------------------------------------------------------
# JSON descriptors
# ---------------------------------------------------------------------------


def inner_to_descriptor(phi: InnerFunction) -> dict:
    """JSON-ready descriptor; see ``inner_from_descriptor`` for the schema."""
    if isinstance(phi, BlaschkeProduct):
        return {
            "kind": "blaschke",
            "zeros": [{"re": a.real, "im": a.imag} for a in phi.zeros],
            "const_angle": phi.const_angle,
        }
    if isinstance(phi, AtomicSingular):
        return {"kind": "atomic", "atom_angle": phi.atom_angle, "mass": phi.mass}
    if isinstance(phi, ProductInner):
        return {
            "kind": "product",
            "factors": [inner_to_descriptor(f) for f in phi.factors],
        }
    raise TypeError(f"not an inner function descriptor: {phi!r}")


def inner_from_descriptor(data: dict) -> InnerFunction:
    """Parse {"kind": "blaschke", "zeros": [{"re":..,"im":..}], "const_angle":..}
    | {"kind": "atomic", "atom_angle":.., "mass":..}
    | {"kind": "product", "factors": [..]}  (angles in radians)."""
    kind = data.get("kind")
    if kind == "blaschke":
        zeros = tuple(complex(z["re"], z["im"]) for z in data.get("zeros", []))
        return BlaschkeProduct(zeros=zeros, const_angle=data.get("const_angle", 0.0))
    if kind == "atomic":
        return AtomicSingular(atom_angle=data["atom_angle"], mass=data.get("mass", 1.0))
    if kind == "product":
        return ProductInner(tuple(inner_from_descriptor(f) for f in data["factors"]))
    raise DomainError(f"unknown inner function kind {kind!r}")
