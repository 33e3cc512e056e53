"""Closed-form consistency checks for two concrete families of Type II
subspaces, runnable one by one or as part of the verification battery.

Family 1 (two Blaschke factors, common angle 0): with phi_j = b_{alpha_j},

    ||g_j||^2 = sigma_j^2 (1 - alpha_j^2) / (1 + alpha_j^2 - 2 alpha_j cos theta_j)

and the restrictions are unitarily equivalent exactly when

    1/sigma_1^2 - 1/sigma_2^2 = 2 (alpha_2 - alpha_1) / ((1-alpha_1)(1-alpha_2)).

Family 2 (one Blaschke factor and the singular atom exp((z+1)/(z-1)),
common angle pi): the boundary modulus of (phi_2 - 1)/(z + 1) is

    sin^2((1/2) cot(theta/2)) / cos^2(theta/2),

whose circle integral is pi (substitute x = (1/2) cot(theta/2) to get the
classical integral of sin^2 x / x^2), so ||g_2||^2 = sigma_2^2 / 2 and the
equivalence condition becomes

    1/sigma_1^2 - 1/sigma_2^2 = (3 alpha - 1) / (2 (1 + alpha)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .errors import DomainError, PrecisionLoss, UndefinedBoundaryValue
from .hardy import TWO_PI, AtomicSingular, inner_eval, wrap_angle

#: the singular inner function of Family 2: atom at angle 0, unit mass
EXAMPLE_ATOM = AtomicSingular(atom_angle=0.0, mass=1.0)


@dataclass(frozen=True)
class CheckResult:
    """One named numerical check.

    ``comparison`` selects the pass rule:
    "abs"   -- |expected - computed| <= tolerance * max(1, |expected|);
    "upper" -- computed <= expected + tolerance (residual budgets);
    "lower" -- computed >= expected (gap and threshold witnesses).
    """

    name: str
    expected: float
    computed: float
    tolerance: float
    comparison: str = "abs"
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        for attr in ("expected", "computed", "tolerance"):
            object.__setattr__(self, attr, float(getattr(self, attr)))

    @property
    def passed(self) -> bool:
        if self.comparison == "abs":
            return abs(self.expected - self.computed) <= self.tolerance * max(
                1.0, abs(self.expected)
            )
        if self.comparison == "upper":
            return self.computed <= self.expected + self.tolerance
        if self.comparison == "lower":
            return self.computed >= self.expected
        raise DomainError(f"unknown comparison {self.comparison!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "computed": self.computed,
            "tolerance": self.tolerance,
            "comparison": self.comparison,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# Family 1
# ---------------------------------------------------------------------------


def blaschke_g_norm_formula(alpha: float, theta: float, sigma: float) -> float:
    """||g||^2 for phi = b_alpha: sigma^2 (1-alpha^2)/(1+alpha^2-2 alpha cos theta)."""
    if not 0 <= alpha < 1:
        raise DomainError("alpha must lie in [0, 1)")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    return sigma**2 * (1.0 - alpha**2) / (1.0 + alpha**2 - 2.0 * alpha * math.cos(theta))


def example1_solve_sigma2(alpha1: float, alpha2: float, sigma1: float) -> float:
    """The sigma_2 making the two-Blaschke pair (angle 0) equivalent."""
    rhs = 2.0 * (alpha2 - alpha1) / ((1.0 - alpha1) * (1.0 - alpha2))
    inv = 1.0 / sigma1**2 - rhs
    if inv <= 0:
        raise DomainError("no positive sigma_2 solves the identity for these alphas")
    return 1.0 / math.sqrt(inv)


def example1_condition(
    alpha1: float, alpha2: float, sigma1: float, sigma2: float, tol: float = 1e-9
) -> CheckResult:
    """Equivalence condition of the two-Blaschke family at angle 0."""
    lhs = 1.0 / sigma1**2 - 1.0 / sigma2**2
    rhs = 2.0 * (alpha2 - alpha1) / ((1.0 - alpha1) * (1.0 - alpha2))
    return CheckResult("example1_condition", rhs, lhs, tol)


# ---------------------------------------------------------------------------
# Family 2
# ---------------------------------------------------------------------------


def example2_boundary_modulus(theta: float) -> float:
    """|(phi_2(e^{i theta}) - 1)/(e^{i theta} + 1)|^2 in closed form.

    Evaluated through the equivalent expression
    (1 + 4 t^2) (sin t / t)^2 / 4 with t = (1/2) cot(theta/2), which is
    numerically stable through the removable point theta = pi (value 1/4).
    The atom theta = 0 (mod 2 pi) has no value.
    """
    theta = wrap_angle(theta)
    if theta == 0.0:
        raise UndefinedBoundaryValue("the boundary modulus has no value at the atom")
    t = 0.5 / math.tan(theta / 2.0)
    sinc = 1.0 if t == 0.0 else math.sin(t) / t
    return (1.0 + 4.0 * t * t) * sinc * sinc / 4.0


def example2_boundary_modulus_direct(theta: float) -> float:
    """Same modulus from the inner function itself (oracle path)."""
    z = cmath.exp(1j * wrap_angle(theta))
    return abs((inner_eval(EXAMPLE_ATOM, z) - 1.0) / (z + 1.0)) ** 2


def integral_substitution_path(x_cut: float = 1e4) -> dict:
    """Circle integral of the boundary modulus via x = (1/2) cot(theta/2).

    The substitution turns the integral into the line integral of
    sin^2 x / x^2, computed over [-x_cut, x_cut] plus the analytic tail
    1/X + sin(2X)/(2X^2) (remainder below 1/(2X^2)); the crude two-sided
    tail bound 2/X is reported alongside.
    """
    head, _ = quad(lambda x: (math.sin(x) / x) ** 2 if x else 1.0, 0.0, 1.0,
                   epsabs=1e-13, epsrel=1e-13)
    # int_1^X sin^2/x^2 = int_1^X 1/(2x^2) - int_1^X cos(2x)/(2x^2)
    body = 0.5 * (1.0 - 1.0 / x_cut)
    osc, _ = quad(lambda x: 0.5 / (x * x), 1.0, x_cut, weight="cos", wvar=2.0,
                  limit=2000)
    truncated = 2.0 * (head + body - osc)
    tail_correction = 1.0 / x_cut + math.sin(2.0 * x_cut) / (2.0 * x_cut**2)
    return {
        "value": truncated + tail_correction,
        "truncated_value": truncated,
        "tail_correction": tail_correction,
        "tail_bound": 2.0 / x_cut,
        "remainder_bound": 0.5 / x_cut**2,
    }


def integral_adaptive_path(window: float = 3e-4) -> dict:
    """Circle integral of the boundary modulus by adaptive quadrature in
    theta, excluding a window around the atom whose mass is restored from
    the smooth envelope 2/|e^{i theta} + 1|^2 scaled by the oscillation
    mean (the same construction as the substitution tail, with remainder
    O(window^2))."""
    val1, e1 = quad(example2_boundary_modulus_direct, window, math.pi,
                    limit=6000, epsabs=1e-10, epsrel=1e-10)
    val2, e2 = quad(example2_boundary_modulus_direct, math.pi, TWO_PI - window,
                    limit=6000, epsabs=1e-10, epsrel=1e-10)

    def envelope(t: float) -> float:
        return 2.0 / abs(cmath.exp(1j * t) + 1.0) ** 2

    corr1, _ = quad(envelope, 0.0, window, limit=200)
    corr2, _ = quad(envelope, TWO_PI - window, TWO_PI, limit=200)
    return {
        "value": val1 + val2 + corr1 + corr2,
        "window": window,
        "window_correction": corr1 + corr2,
        "quad_error": e1 + e2,
    }


def example2_integral(tol: float = 1e-6) -> CheckResult:
    """Both evaluation paths of the circle integral against pi."""
    if tol < 1e-6:
        raise DomainError("tolerance below 1e-6 is not certified by the tail bounds")
    sub = integral_substitution_path()
    ada = integral_adaptive_path()
    agreement = abs(sub["value"] - ada["value"])
    worst = max(abs(sub["value"] - math.pi), abs(ada["value"] - math.pi))
    if agreement > 2 * tol:
        raise PrecisionLoss("integral paths disagree", agreement)
    return CheckResult(
        "example2_integral",
        math.pi,
        sub["value"] if abs(sub["value"] - math.pi) >= abs(ada["value"] - math.pi)
        else ada["value"],
        tol,
        details={
            "substitution": sub["value"],
            "adaptive": ada["value"],
            "agreement": agreement,
            "worst_deviation": worst,
        },
    )


def example2_solve_sigma2(alpha: float, sigma1: float) -> float:
    """The sigma_2 making the Blaschke/atom pair (angle pi) equivalent."""
    rhs = (3.0 * alpha - 1.0) / (2.0 * (1.0 + alpha))
    inv = 1.0 / sigma1**2 - rhs
    if inv <= 0:
        raise DomainError("no positive sigma_2 solves the identity for this alpha")
    return 1.0 / math.sqrt(inv)


def example2_condition(
    alpha: float, sigma1: float, sigma2: float, tol: float = 1e-9
) -> CheckResult:
    """Equivalence condition of the Blaschke/atom family at angle pi."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    lhs = 1.0 / sigma1**2 - 1.0 / sigma2**2
    rhs = (3.0 * alpha - 1.0) / (2.0 * (1.0 + alpha))
    return CheckResult("example2_condition", rhs, lhs, tol)
