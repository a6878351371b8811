"""Convexity-based bounds on the error of the corrected midpoint rule.

Each bound depends only on the rule order, the interval, and the endpoint
magnitudes ``A = |f^(n)(a)|`` and ``B = |f^(n)(b)|``. They hold when
``|f^(n)|`` (convex bound) or ``|f^(n)|^q`` (Hölder and power-mean bounds) is
convex on ``[a, b]``; see :py:mod:`hh_midpoint.convexity`.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .expr import Expression, eval_jet
from .kernel import RuleOrder, scaled_power
from .quadrature import Interval

DEFAULT_Q_GRID: tuple[float, ...] = (1.0, 1.5, 2.0, 3.0, 5.0)
"""Exponents tried by :py:func:`best_bound` when none are given."""

CONJUGACY_TOLERANCE = 1e-12
"""Relative tolerance on ``1/p + 1/q = 1``."""


class Theorem(Enum):
    """The three bounds, in tie-breaking order."""

    CONVEX = 1
    """The bound for convex ``|f^(n)|``."""

    HOLDER = 2
    """The Hölder bound for convex ``|f^(n)|^q``, ``q > 1``."""

    POWER_MEAN = 3
    """The power-mean bound for convex ``|f^(n)|^q``, ``q >= 1``."""

    @property
    def label(self) -> str:
        """The name used in reports."""
        return _LABELS[self]


_LABELS = {
    Theorem.CONVEX: "Convex",
    Theorem.HOLDER: "Holder",
    Theorem.POWER_MEAN: "PowerMean",
}


@dataclass(frozen=True)
class EndpointDerivs:
    """``A = |f^(n)(a)|`` and ``B = |f^(n)(b)|``."""

    A: float
    B: float

    def __post_init__(self) -> None:
        for name, value in (("A", self.A), ("B", self.B)):
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and non-negative: {value}")

    @classmethod
    def from_expression(
        cls, f: Expression, iv: Interval, n: int | RuleOrder
    ) -> EndpointDerivs:
        """Evaluates the endpoint magnitudes of ``f^(n)``.

        Raises:
            DomainError: Raised if ``f^(n)`` cannot be evaluated at an end.
        """
        order = RuleOrder.of(n).n
        return cls(
            A=abs(eval_jet(f, iv.a, order).derivs[order]),
            B=abs(eval_jet(f, iv.b, order).derivs[order]),
        )

    def swapped(self) -> EndpointDerivs:
        """Returns these magnitudes with ``A`` and ``B`` exchanged."""
        return EndpointDerivs(A=self.B, B=self.A)


@dataclass(frozen=True)
class HolderExponents:
    """Conjugate exponents with ``1/p + 1/q = 1`` and ``p, q > 1``."""

    p: float
    q: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise DomainError(f"exponents must be finite: p={self.p}, q={self.q}")
        if not (self.p > 1 and self.q > 1):
            raise DomainError(f"exponents must exceed 1: p={self.p}, q={self.q}")
        if abs(1 / self.p + 1 / self.q - 1) > CONJUGACY_TOLERANCE:
            raise DomainError(
                f"exponents are not conjugate: 1/{self.p} + 1/{self.q} != 1"
            )

    @classmethod
    def conjugate(cls, q: float) -> HolderExponents:
        """Builds the pair for ``q``, with ``p = q / (q - 1)``."""
        if not q > 1:
            raise DomainError(f"q must exceed 1 for a Hölder pair: {q}")
        return cls(p=q / (q - 1), q=q)


@dataclass(frozen=True)
class BoundReport:
    """One bound's value, together with what is known about its hypothesis."""

    theorem: Theorem
    """Which bound this is."""

    value: float
    """The bound on ``|∫f - rule|``."""

    q_used: float | None = None
    """The exponent, or None for the convex bound."""

    hypothesis_certified: bool = False
    """Whether the bound's convexity hypothesis was certified on a grid."""

    actual_error: float = math.nan
    """The rule's actual error, if known."""

    def dominates(self, slack: float) -> bool:
        """Returns true if ``actual_error <= value * (1 + slack) + slack``."""
        return self.actual_error <= self.value * (1 + slack) + slack


def bound_convex(n: int | RuleOrder, iv: Interval, d: EndpointDerivs) -> float:
    """The bound for convex ``|f^(n)|``.

    Returns:
        float: ``(b-a)^(n+1) / (2^n (n+1)!) * (A + B) / 2``
    """
    order = RuleOrder.of(n).n
    scale = scaled_power(iv.length, order + 1, order, order + 1)
    return scale * (d.A + d.B) / 2


def bound_holder(
    n: int | RuleOrder, iv: Interval, d: EndpointDerivs, exps: HolderExponents
) -> float:
    """The Hölder bound for convex ``|f^(n)|^q``.

    Returns:
        float: ``(b-a)^(n+1) / (2^(n+1) n!) * (1 / (np + 1))^(1/p)``
        ``* {((A^q + 3B^q) / 4)^(1/q) + ((3A^q + B^q) / 4)^(1/q)}``
    """
    order = RuleOrder.of(n).n
    p, q = exps.p, exps.q
    scale = scaled_power(iv.length, order + 1, order + 1, order)
    kernel = (1 / (order * p + 1)) ** (1 / p)
    aq, bq = d.A**q, d.B**q
    brackets = ((aq + 3 * bq) / 4) ** (1 / q) + ((3 * aq + bq) / 4) ** (1 / q)
    return scale * kernel * brackets


def bound_power_mean(
    n: int | RuleOrder, iv: Interval, d: EndpointDerivs, q: float
) -> float:
    """The power-mean bound for convex ``|f^(n)|^q``, ``q >= 1``.

    At ``q = 1`` this coincides with :py:func:`bound_convex`.

    Returns:
        float: ``(b-a)^(n+1) / (2^(n+1) (n+1)!)``
        ``* {[(n+1)/(2n+4) A^q + (n+3)/(2n+4) B^q]^(1/q)``
        ``+ [(n+3)/(2n+4) A^q + (n+1)/(2n+4) B^q]^(1/q)}``

    Raises:
        DomainError: Raised if ``q < 1``.
    """
    if not q >= 1 or not math.isfinite(q):
        raise DomainError(f"q must be finite and at least 1: {q}")
    order = RuleOrder.of(n).n
    scale = scaled_power(iv.length, order + 1, order + 1, order + 1)
    near = (order + 1) / (2 * order + 4)
    far = (order + 3) / (2 * order + 4)
    aq, bq = d.A**q, d.B**q
    brackets = (near * aq + far * bq) ** (1 / q) + (far * aq + near * bq) ** (1 / q)
    return scale * brackets


def all_bounds(
    n: int | RuleOrder,
    iv: Interval,
    d: EndpointDerivs,
    q_grid: Sequence[float] = DEFAULT_Q_GRID,
) -> list[BoundReport]:
    """Evaluates every bound over a grid of exponents.

    The convex bound comes first, then the Hölder bound for each ``q > 1``,
    then the power-mean bound for each ``q``, both in grid order.

    Raises:
        DomainError: Raised if the grid is empty or has an entry below 1.
    """
    if not q_grid:
        raise DomainError("q grid must not be empty")
    for q in q_grid:
        if not q >= 1 or not math.isfinite(q):
            raise DomainError(f"q grid entries must be finite and at least 1: {q}")
    reports = [BoundReport(Theorem.CONVEX, bound_convex(n, iv, d))]
    for q in q_grid:
        if q > 1:
            value = bound_holder(n, iv, d, HolderExponents.conjugate(q))
            reports.append(BoundReport(Theorem.HOLDER, value, q_used=q))
    for q in q_grid:
        value = bound_power_mean(n, iv, d, q)
        reports.append(BoundReport(Theorem.POWER_MEAN, value, q_used=q))
    return reports


def select_best(reports: Sequence[BoundReport]) -> BoundReport:
    """Returns the smallest bound.

    Ties go to the lower theorem (convex, then Hölder, then power-mean), then
    to the smaller exponent.
    """
    return min(
        reports,
        key=lambda report: (
            report.value,
            report.theorem.value,
            report.q_used if report.q_used is not None else -math.inf,
        ),
    )


def best_bound(
    n: int | RuleOrder,
    iv: Interval,
    d: EndpointDerivs,
    q_grid: Sequence[float] = DEFAULT_Q_GRID,
) -> BoundReport:
    """Evaluates all bounds and returns the smallest.

    Args:
        n: The rule order
        iv: The interval
        d: The endpoint magnitudes of ``f^(n)``
        q_grid: Exponents, each at least 1. Entries above 1 are also used for
            the Hölder bound with ``p = q / (q - 1)``.

    Returns:
        BoundReport: The best bound. Its hypothesis is not certified here.
    """
    return select_best(all_bounds(n, iv, d, q_grid))
