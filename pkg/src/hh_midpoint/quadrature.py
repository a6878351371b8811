"""The corrected midpoint rule, its exact remainder, and a reference integral.

For ``n >= 1`` and ``f`` n-times differentiable on ``[a, b]``::

    ∫_a^b f = Σ_{k<n} (1 + (-1)^k) / (2^(k+1) (k+1)!) (b-a)^(k+1) f^(k)((a+b)/2)
              + (b-a)^(n+1) ∫_0^1 M_n(t) f^(n)(ta + (1-t)b) dt

:py:func:`check_identity` evaluates all three pieces independently, so the
residual measures how well the identity holds numerically.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .expr import Expression, derivatives, eval_jet, evaluate
from .kernel import RuleOrder, kernel_values
from .types import FloatArray, Integrand

logger = logging.getLogger(__name__)

FACTORIALS: tuple[float, ...] = tuple(float(math.factorial(k)) for k in range(14))
"""``k!`` as binary64, for ``k`` in ``0..13``."""

GAUSS_POINTS = 10
"""Nodes per panel of the composite Gauss-Legendre rule."""

DEFAULT_PANEL_TOLERANCE = 1e-11
"""Relative agreement required between successive panel refinements."""

MAX_PANELS = 2**16
"""The most panels a composite Gauss-Legendre integration may use."""

DEFAULT_REFERENCE_TOLERANCE = 1e-12
"""Default relative tolerance of :py:func:`reference_integral`."""

MIN_REFERENCE_TOLERANCE = 1e-13
"""The tightest relative tolerance :py:func:`reference_integral` accepts."""

MAX_DEPTH = 60
"""Maximum bisection depth of the adaptive reference integrator."""

MAX_SEGMENTS = 5000
"""Maximum number of live segments in the adaptive reference integrator."""

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_POINTS)

# Kronrod 15 / Gauss 7 pair, abscissae in decreasing order on [0, 1).
_XGK = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
_WGK = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
_WG = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)
_KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at the odd Kronrod abscissae.
_GAUSS_IN_KRONROD = np.array([1, 3, 5, 7, 9, 11, 13])
_GAUSS_IN_KRONROD_WEIGHTS = np.concatenate([_WG[:-1], _WG[::-1]])
_ROUNDOFF = 50 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class Interval:
    """A finite interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"interval ends must be finite: [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DomainError(f"interval must satisfy a < b: [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        """``b - a``."""
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        """``(a + b) / 2``."""
        return (self.a + self.b) / 2

    def split(self, c: float) -> tuple[Interval, Interval]:
        """Splits this interval at an interior point."""
        return Interval(self.a, c), Interval(c, self.b)


@dataclass(frozen=True)
class QuadratureResult:
    """The three pieces of the corrected midpoint identity."""

    rule_value: float
    """The corrected midpoint sum."""

    remainder: float
    """The kernel remainder term."""

    reference: float
    """A high-precision value of the integral."""

    @property
    def identity_residual(self) -> float:
        """``|rule_value + remainder - reference|``."""
        return abs(self.rule_value + self.remainder - self.reference)

    @property
    def actual_error(self) -> float:
        """``|reference - rule_value|``, the error the theorem bounds estimate."""
        return abs(self.reference - self.rule_value)


@dataclass(frozen=True)
class PanelIntegral:
    """Result of a composite Gauss-Legendre integration."""

    value: float
    """The integral."""

    magnitude: float
    """The integral of the absolute value of the integrand."""

    panels: int
    """The number of panels used."""


def rule_coefficient(k: int) -> float:
    """Returns ``(1 + (-1)^k) / (2^(k+1) (k+1)!)``, exactly zero for odd ``k``."""
    return (1.0 + (-1.0) ** k) / (2.0 ** (k + 1) * FACTORIALS[k + 1])


def composite_gauss(
    integrand: Integrand,
    lo: float,
    hi: float,
    panels: int,
) -> PanelIntegral:
    """Integrates with a fixed number of equal Gauss-Legendre panels.

    Args:
        integrand: A vectorised function
        lo: Lower limit
        hi: Upper limit
        panels: Number of panels

    Returns:
        PanelIntegral: The integral and the integral of its absolute value
    """
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    center = 0.5 * (edges[1:] + edges[:-1])
    points = center[:, np.newaxis] + half[:, np.newaxis] * _GAUSS_NODES
    weights = half[:, np.newaxis] * _GAUSS_WEIGHTS
    values = integrand(points)
    return PanelIntegral(
        value=float(np.sum(weights * values)),
        magnitude=float(np.sum(weights * np.abs(values))),
        panels=panels,
    )


def refine_gauss(
    integrand: Integrand,
    lo: float,
    hi: float,
    rel_tol: float = DEFAULT_PANEL_TOLERANCE,
    max_panels: int = MAX_PANELS,
) -> PanelIntegral:
    """Doubles the panel count until two successive integrals agree.

    Agreement is measured against the integral of the absolute value, so
    integrands that cancel or vanish still converge.

    Args:
        integrand: A vectorised function, smooth on ``[lo, hi]``
        lo: Lower limit
        hi: Upper limit
        rel_tol: Relative agreement between successive refinements
        max_panels: The largest panel count to try

    Returns:
        PanelIntegral: The finest integral computed

    Raises:
        ConvergenceError: Raised if ``max_panels`` is reached without agreement.
    """
    previous = composite_gauss(integrand, lo, hi, 1)
    panels = 2
    while panels <= max_panels:
        current = composite_gauss(integrand, lo, hi, panels)
        if abs(current.value - previous.value) <= rel_tol * current.magnitude:
            logger.debug("gauss panels on [%r, %r] converged at %d", lo, hi, panels)
            return current
        previous = current
        panels *= 2
    raise ConvergenceError(
        f"panel refinement on [{lo}, {hi}] did not reach relative agreement "
        f"{rel_tol} with {max_panels} panels"
    )


def corrected_midpoint(f: Expression, iv: Interval, n: int | RuleOrder) -> float:
    """Evaluates the n-th order corrected midpoint rule.

    The coefficients are computed as written, so odd-``k`` terms contribute
    an exact zero.

    Args:
        f: The integrand
        iv: The interval of integration
        n: The rule order

    Returns:
        float: ``Σ_{k<n} c_k (b-a)^(k+1) f^(k)((a+b)/2)``

    Raises:
        DomainError: Raised if the jet cannot be evaluated at the midpoint.
    """
    order = RuleOrder.of(n).n
    jet = eval_jet(f, iv.midpoint, order - 1)
    total = 0.0
    for k in range(order):
        total += rule_coefficient(k) * iv.length ** (k + 1) * jet.derivs[k]
    return total


def _remainder_integrand(
    f: Expression, iv: Interval, order: int
) -> Integrand:
    def integrand(t: FloatArray) -> FloatArray:
        # t = 0 maps to b
        x = t * iv.a + (1.0 - t) * iv.b
        weight = kernel_values(order, t)
        values: FloatArray = weight * derivatives(f, x, order)[order]
        return values

    return integrand


def _kernel_integral(
    integrand: Integrand,
    rel_tol: float,
) -> tuple[PanelIntegral, PanelIntegral]:
    # The kernel is not smooth at t = 1/2, so each half is integrated alone.
    return (
        refine_gauss(integrand, 0.0, 0.5, rel_tol=rel_tol),
        refine_gauss(integrand, 0.5, 1.0, rel_tol=rel_tol),
    )


def remainder_integral(
    f: Expression,
    iv: Interval,
    n: int | RuleOrder,
    rel_tol: float = DEFAULT_PANEL_TOLERANCE,
) -> float:
    """Evaluates the exact remainder ``(b-a)^(n+1) ∫_0^1 M_n(t) f^(n)(ta+(1-t)b) dt``.

    Args:
        f: The integrand
        iv: The interval of integration
        n: The rule order
        rel_tol: Relative agreement between successive panel refinements

    Returns:
        float: The remainder term

    Raises:
        DomainError: Raised if ``f^(n)`` cannot be evaluated inside ``iv``.
        ConvergenceError: Raised if the panel refinement does not converge.
    """
    order = RuleOrder.of(n).n
    left, right = _kernel_integral(_remainder_integrand(f, iv, order), rel_tol)
    return iv.length ** (order + 1) * (left.value + right.value)


def remainder_abs_integral(
    f: Expression,
    iv: Interval,
    n: int | RuleOrder,
    rel_tol: float = DEFAULT_PANEL_TOLERANCE,
) -> float:
    """Evaluates ``(b-a)^(n+1) ∫_0^1 |M_n(t)| |f^(n)(ta+(1-t)b)| dt``.

    This bounds the rule's error without any convexity assumption, and every
    theorem bound is an upper estimate of it.
    """
    order = RuleOrder.of(n).n
    left, right = _kernel_integral(_remainder_integrand(f, iv, order), rel_tol)
    return iv.length ** (order + 1) * (left.magnitude + right.magnitude)


@dataclass(frozen=True)
class _Segment:
    lo: float
    hi: float
    depth: int
    value: float
    error: float
    magnitude: float


def _kronrod(f: Expression, lo: float, hi: float, depth: int) -> _Segment:
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    values = evaluate(f, center + half * _KRONROD_NODES)
    kronrod = half * float(np.dot(_KRONROD_WEIGHTS, values))
    gauss = half * float(np.dot(_GAUSS_IN_KRONROD_WEIGHTS, values[_GAUSS_IN_KRONROD]))
    return _Segment(
        lo=lo,
        hi=hi,
        depth=depth,
        value=kronrod,
        error=abs(kronrod - gauss),
        magnitude=half * float(np.dot(_KRONROD_WEIGHTS, np.abs(values))),
    )


def reference_integral(
    f: Expression, iv: Interval, rel_tol: float = DEFAULT_REFERENCE_TOLERANCE
) -> float:
    """Integrates ``f`` over ``iv`` with adaptive Gauss-Kronrod bisection.

    Each segment is integrated with the 15-point Kronrod rule, and the
    embedded 7-point Gauss rule provides its error estimate. The segment with
    the largest estimate is bisected until the total estimate is below
    ``rel_tol`` relative to the integral (or below the roundoff floor).

    Args:
        f: The integrand
        iv: The interval of integration
        rel_tol: Relative tolerance, at least :py:data:`MIN_REFERENCE_TOLERANCE`

    Returns:
        float: The integral

    Raises:
        ValueError: Raised if ``rel_tol`` is too small.
        DomainError: Raised if ``f`` cannot be evaluated inside ``iv``.
        ConvergenceError: Raised if a segment would be bisected beyond
            :py:data:`MAX_DEPTH`, or too many segments are needed.
    """
    if not rel_tol >= MIN_REFERENCE_TOLERANCE:
        raise ValueError(
            f"reference tolerance must be at least {MIN_REFERENCE_TOLERANCE}: {rel_tol}"
        )
    segments = [_kronrod(f, iv.a, iv.b, 0)]
    while True:
        total = math.fsum(segment.value for segment in segments)
        error = math.fsum(segment.error for segment in segments)
        magnitude = math.fsum(segment.magnitude for segment in segments)
        if error <= max(rel_tol * abs(total), _ROUNDOFF * magnitude):
            logger.debug(
                "reference integral of %r on [%r, %r] used %d segments",
                f.source,
                iv.a,
                iv.b,
                len(segments),
            )
            return total
        worst = max(segments, key=lambda segment: segment.error)
        if worst.depth >= MAX_DEPTH:
            raise ConvergenceError(
                f"adaptive integration of {f.source!r} exceeded depth {MAX_DEPTH} "
                f"near [{worst.lo}, {worst.hi}]"
            )
        if len(segments) >= MAX_SEGMENTS:
            raise ConvergenceError(
                f"adaptive integration of {f.source!r} needed more than "
                f"{MAX_SEGMENTS} segments"
            )
        segments.remove(worst)
        middle = 0.5 * (worst.lo + worst.hi)
        segments.append(_kronrod(f, worst.lo, middle, worst.depth + 1))
        segments.append(_kronrod(f, middle, worst.hi, worst.depth + 1))


def check_identity(
    f: Expression,
    iv: Interval,
    n: int | RuleOrder,
    reference_tol: float = DEFAULT_REFERENCE_TOLERANCE,
) -> QuadratureResult:
    """Evaluates the rule, the remainder and the reference integral.

    Args:
        f: The integrand
        iv: The interval of integration
        n: The rule order
        reference_tol: Relative tolerance of the reference integral

    Returns:
        QuadratureResult: All three pieces; ``identity_residual`` measures how
        well they add up.
    """
    return QuadratureResult(
        rule_value=corrected_midpoint(f, iv, n),
        remainder=remainder_integral(f, iv, n),
        reference=reference_integral(f, iv, reference_tol),
    )
