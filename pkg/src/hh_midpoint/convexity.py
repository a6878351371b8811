"""Grid certificates for the convexity hypotheses of the bounds.

A function ``g`` is midpoint convex on a uniform grid if
``g((x_i + x_j) / 2) <= (g(x_i) + g(x_j)) / 2`` for every pair of nodes whose
midpoint is itself a node. Passing this test is evidence, not proof: a
certificate makes a bound's domination "guaranteed" in reports, and its
absence makes it "observed".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError
from .expr import Expression, derivatives
from .kernel import RuleOrder
from .quadrature import Interval
from .types import FloatArray

DEFAULT_GRID_POINTS = 129
"""A power of two plus one, so halving keeps midpoints on the grid."""

DEFAULT_CONVEXITY_TOLERANCE = 1e-9
"""Allowed defect, relative to ``1 + max|g|``."""


class ConvexityTarget(Enum):
    """The function whose convexity is certified."""

    ABS_DERIV = auto()
    """``|f^(n)|``."""

    ABS_DERIV_POW_Q = auto()
    """``|f^(n)|^q``."""

    FUNCTION = auto()
    """``f`` itself, without an absolute value."""


@dataclass(frozen=True)
class ConvexityCertificate:
    """The outcome of a grid convexity test."""

    target: ConvexityTarget
    """What was tested."""

    q: float | None
    """The exponent, for ``ABS_DERIV_POW_Q``."""

    grid_points: int
    """Number of grid nodes."""

    max_violation: float
    """The largest midpoint defect, clamped below at ``-tolerance``."""

    tolerance: float
    """The absolute defect tolerance that was applied."""

    @property
    def certified(self) -> bool:
        """Whether the largest defect is within tolerance."""
        return self.max_violation <= self.tolerance


def _midpoint_pairs(m: int) -> tuple[NDArray[np.intp], NDArray[np.intp]]:
    i, j = np.triu_indices(m, k=2)
    on_grid = (i + j) % 2 == 0
    return i[on_grid], j[on_grid]


def _certify_samples(
    g: FloatArray,
    target: ConvexityTarget,
    q: float | None,
    rel_tol: float,
) -> ConvexityCertificate:
    i, j = _midpoint_pairs(len(g))
    defects = g[(i + j) // 2] - (g[i] + g[j]) / 2
    tolerance = rel_tol * (1.0 + float(np.max(np.abs(g))))
    return ConvexityCertificate(
        target=target,
        q=q,
        grid_points=len(g),
        max_violation=max(float(np.max(defects)), -tolerance),
        tolerance=tolerance,
    )


def _grid(iv: Interval, m: int) -> FloatArray:
    if m < 3:
        raise DomainError(f"a convexity grid needs at least 3 points: {m}")
    return np.linspace(iv.a, iv.b, m)


def certify(
    f: Expression,
    iv: Interval,
    n: int | RuleOrder,
    q: float | None = None,
    m: int = DEFAULT_GRID_POINTS,
    rel_tol: float = DEFAULT_CONVEXITY_TOLERANCE,
) -> ConvexityCertificate:
    """Tests ``|f^(n)|``, or ``|f^(n)|^q``, for midpoint convexity on a grid.

    Args:
        f: The integrand
        iv: The interval
        n: The derivative order
        q: If given, the exponent applied to ``|f^(n)|``
        m: Number of uniform grid nodes, at least 3
        rel_tol: Allowed defect relative to ``1 + max|g|``

    Returns:
        ConvexityCertificate: The certificate

    Raises:
        DomainError: Raised if ``f^(n)`` cannot be evaluated on the grid, or
            the grid is too small.
    """
    order = RuleOrder.of(n).n
    g = np.abs(derivatives(f, _grid(iv, m), order)[order])
    if q is None:
        return _certify_samples(g, ConvexityTarget.ABS_DERIV, None, rel_tol)
    if not q >= 1:
        raise DomainError(f"q must be at least 1: {q}")
    return _certify_samples(g**q, ConvexityTarget.ABS_DERIV_POW_Q, q, rel_tol)


def certify_function(
    f: Expression,
    iv: Interval,
    m: int = DEFAULT_GRID_POINTS,
    rel_tol: float = DEFAULT_CONVEXITY_TOLERANCE,
) -> ConvexityCertificate:
    """Tests ``f`` itself for midpoint convexity on a grid.

    This is the hypothesis of the two-sided mean value inequality checked by
    :py:func:`hh_midpoint.harness.run_hh_sanity`.
    """
    g = derivatives(f, _grid(iv, m), 0)[0]
    return _certify_samples(g, ConvexityTarget.FUNCTION, None, rel_tol)
