"""The piecewise kernel of the n-th order corrected midpoint rule.

``M_n(t) = t^n / n!`` on ``[0, 1/2]`` and ``(t - 1)^n / n!`` on ``(1/2, 1]``.
Weighted against ``f^(n)(ta + (1 - t)b)`` it yields the exact remainder of the
rule.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, OrderError

KERNEL_GRID_STEP = 1e-3
"""Spacing of the grid written by :py:func:`kernel_table`."""


@dataclass(frozen=True)
class RuleOrder:
    """The order ``n >= 1`` of the corrected midpoint rule."""

    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise OrderError(f"rule order must be an integer: {self.n!r}")
        if self.n < 1:
            raise OrderError(f"rule order must be at least 1: {self.n}")

    @classmethod
    def of(cls, n: int | RuleOrder) -> RuleOrder:
        """Returns ``n`` as a rule order, validating plain integers."""
        if isinstance(n, RuleOrder):
            return n
        return cls(n)

    def __int__(self) -> int:
        return self.n


FACTORIAL_LIMIT = 170
"""The largest ``k`` whose ``k!`` is finite in binary64."""

_LOG_FLOAT_MAX = math.log(sys.float_info.max)


def scaled_power(x: float, power: int, halvings: int, factorial: int) -> float:
    """Returns ``x^power / (2^halvings factorial!)``.

    Terms are combined in log space once any of them leaves the binary64
    range, so high orders underflow to zero (or overflow to infinity) instead of
    raising :py:class:`OverflowError`.
    """
    if factorial <= FACTORIAL_LIMIT:
        try:
            numerator = x**power
            denominator = 2.0**halvings * math.factorial(factorial)
        except OverflowError:
            pass
        else:
            if math.isfinite(numerator) and math.isfinite(denominator):
                return numerator / denominator
    if x == 0.0 and power > 0:
        return 0.0
    sign = -1.0 if x < 0.0 and power % 2 == 1 else 1.0
    exponent = -halvings * math.log(2.0) - math.lgamma(factorial + 1)
    if power > 0:
        exponent += power * math.log(abs(x))
    if exponent > _LOG_FLOAT_MAX:
        return sign * math.inf
    return sign * math.exp(exponent)


def kernel_value(n: int | RuleOrder, t: float) -> float:
    """Evaluates the kernel at a single point.

    ``t = 1/2`` belongs to the left branch.

    Args:
        n: The rule order
        t: A point in ``[0, 1]``

    Returns:
        float: ``M_n(t)``

    Raises:
        OrderError: Raised if ``n < 1``.
        DomainError: Raised if ``t`` is outside ``[0, 1]``.
    """
    order = RuleOrder.of(n).n
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"kernel argument must be in [0, 1]: {t!r}")
    if t <= 0.5:
        return scaled_power(t, order, 0, order)
    else:
        return scaled_power(t - 1.0, order, 0, order)


def kernel_values(n: int | RuleOrder, t: ArrayLike) -> NDArray[np.float64]:
    """Evaluates the kernel on an array of points, as :py:func:`kernel_value`."""
    order = RuleOrder.of(n).n
    points = np.asarray(t, dtype=np.float64)
    if np.any((points < 0.0) | (points > 1.0)) or np.any(np.isnan(points)):
        raise DomainError("kernel arguments must be in [0, 1]")
    shifted = np.where(points <= 0.5, points, points - 1.0)
    if order <= FACTORIAL_LIMIT:
        values: NDArray[np.float64] = shifted**order / math.factorial(order)
        return values
    with np.errstate(divide="ignore"):
        magnitude = np.exp(order * np.log(np.abs(shifted)) - math.lgamma(order + 1))
    sign = -1.0 if order % 2 == 1 else 1.0
    return np.where(shifted < 0.0, sign * magnitude, magnitude)


def kernel_l1_norm(n: int | RuleOrder) -> float:
    """Returns the integral of ``|M_n|`` over ``[0, 1]``, ``1 / (2^n (n+1)!)``."""
    order = RuleOrder.of(n).n
    return scaled_power(1.0, 0, order, order + 1)


def kernel_integral(n: int | RuleOrder) -> float:
    """Returns the signed integral of ``M_n`` over ``[0, 1]``.

    This is ``(1 + (-1)^n) / (2^(n+1) (n+1)!)``, the coefficient that a
    rule of order ``n`` gains when it is lifted to order ``n + 1``. It vanishes
    for odd ``n``.
    """
    order = RuleOrder.of(n).n
    return (1.0 + (-1.0) ** order) * scaled_power(1.0, 0, order + 1, order + 1)


def kernel_table(
    n: int | RuleOrder, step: float = KERNEL_GRID_STEP
) -> list[tuple[float, float]]:
    """Samples the kernel on a uniform grid over ``[0, 1]``.

    Args:
        n: The rule order
        step: The grid spacing. ``1 / step`` is rounded to the nearest integer.

    Returns:
        list[tuple[float, float]]: ``(t, M_n(t))`` pairs, both ends included.
    """
    count = round(1.0 / step)
    return [(i / count, kernel_value(n, i / count)) for i in range(count + 1)]
