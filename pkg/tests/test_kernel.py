import math

import numpy as np
import pytest
from numpy.typing import NDArray

from hh_midpoint import DomainError, OrderError
from hh_midpoint.kernel import (
    FACTORIAL_LIMIT,
    RuleOrder,
    kernel_integral,
    kernel_l1_norm,
    kernel_table,
    kernel_value,
    kernel_values,
    scaled_power,
)
from hh_midpoint.quadrature import refine_gauss


@pytest.mark.parametrize(
    "n,t,expected", [(1, 0.25, 0.25), (2, 0.75, 0.03125), (3, 1.0, 0.0)]
)
def test_kernel_value(n: int, t: float, expected: float) -> None:
    assert kernel_value(n, t) == expected


def test_midpoint_belongs_to_left_branch() -> None:
    assert kernel_value(1, 0.5) == 0.5
    assert kernel_value(RuleOrder(3), 0.5) == 0.125 / 6


@pytest.mark.parametrize("t", [-0.1, 1.1, math.nan, math.inf])
def test_kernel_value_domain(t: float) -> None:
    with pytest.raises(DomainError):
        kernel_value(1, t)


def test_kernel_values_domain() -> None:
    with pytest.raises(DomainError):
        kernel_values(2, [0.0, 0.5, 1.5])


@pytest.mark.parametrize("n", [0, -1])
def test_rule_order_at_least_one(n: int) -> None:
    with pytest.raises(OrderError):
        RuleOrder(n)
    with pytest.raises(OrderError):
        kernel_value(n, 0.5)
    with pytest.raises(OrderError):
        kernel_l1_norm(n)


def test_rule_order_must_be_integer() -> None:
    with pytest.raises(OrderError):
        RuleOrder(1.5)  # type: ignore[arg-type]
    with pytest.raises(OrderError):
        RuleOrder(True)


def test_rule_order_of() -> None:
    order = RuleOrder(4)
    assert RuleOrder.of(order) is order
    assert RuleOrder.of(4) == order
    assert int(order) == 4


def test_kernel_values_matches_kernel_value() -> None:
    t = np.linspace(0, 1, 257)
    for n in range(1, 9):
        expected = [kernel_value(n, float(s)) for s in t]
        np.testing.assert_allclose(kernel_values(n, t), expected, rtol=1e-15, atol=0)


@pytest.mark.parametrize("n", range(1, 9))
def test_reflection(n: int) -> None:
    for k in range(32):
        t = k / 64
        assert kernel_value(n, 1 - t) == (-1) ** n * kernel_value(n, t)


@pytest.mark.parametrize("n", range(1, 9))
def test_magnitude_bound(n: int) -> None:
    values = kernel_values(n, np.linspace(0, 1, 1001))
    assert np.all(np.abs(values) <= 0.5**n / math.factorial(n))


@pytest.mark.parametrize(
    "n,expected", [(1, 0.25), (2, 0.041666666666666664), (3, 1 / 192)]
)
def test_kernel_l1_norm(n: int, expected: float) -> None:
    assert kernel_l1_norm(n) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", range(1, 9))
def test_kernel_l1_norm_matches_numeric_integral(n: int) -> None:
    def integrand(t: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.abs(kernel_values(n, t))

    numeric = (
        refine_gauss(integrand, 0.0, 0.5).value
        + refine_gauss(integrand, 0.5, 1.0).value
    )
    assert numeric == pytest.approx(kernel_l1_norm(n), abs=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_kernel_integral_matches_numeric_integral(n: int) -> None:
    def integrand(t: NDArray[np.float64]) -> NDArray[np.float64]:
        return kernel_values(n, t)

    numeric = (
        refine_gauss(integrand, 0.0, 0.5).value
        + refine_gauss(integrand, 0.5, 1.0).value
    )
    assert numeric == pytest.approx(kernel_integral(n), abs=1e-12)


def test_kernel_integral_vanishes_for_odd_orders() -> None:
    for n in (1, 3, 5, 7):
        assert kernel_integral(n) == 0.0
    for n in (2, 4, 6):
        assert kernel_integral(n) == kernel_l1_norm(n)


def test_kernel_table() -> None:
    table = kernel_table(2)
    assert len(table) == 1001
    assert table[0] == (0.0, 0.0)
    assert table[500] == (0.5, 0.125)
    assert table[-1] == (1.0, 0.0)


@pytest.mark.parametrize("n", [171, 200, 1000])
def test_high_orders_underflow(n: int) -> None:
    assert kernel_value(n, 0.25) == 0.0
    assert kernel_value(n, 0.75) == 0.0
    assert kernel_l1_norm(n) == 0.0
    assert kernel_integral(n) == 0.0
    assert np.all(kernel_values(n, [0.0, 0.25, 0.5, 0.75, 1.0]) == 0.0)
    assert len(kernel_table(n)) == 1001


def test_scaled_power_is_continuous_across_factorial_limit() -> None:
    # 170! is the last factorial representable as a float.
    below = scaled_power(50.0, FACTORIAL_LIMIT, 0, FACTORIAL_LIMIT)
    above = scaled_power(50.0, FACTORIAL_LIMIT + 1, 0, FACTORIAL_LIMIT + 1)
    assert 0.0 < below < math.inf
    assert above == pytest.approx(below * 50.0 / (FACTORIAL_LIMIT + 1), rel=1e-11)
    assert scaled_power(-50.0, FACTORIAL_LIMIT + 1, 0, FACTORIAL_LIMIT + 1) == -above


def test_scaled_power_overflows_to_infinity() -> None:
    assert scaled_power(1e300, 2, 0, 2) == math.inf
    assert scaled_power(0.0, 3, 2000, 2000) == 0.0
    assert scaled_power(1.0, 0, 2000, 2000) == 0.0
