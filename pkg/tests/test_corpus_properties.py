"""Properties that must hold across the bundled corpus."""

import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from hh_midpoint import (
    Corpus,
    EndpointDerivs,
    Interval,
    SanityOutcome,
    all_bounds,
    bound_convex,
    bound_power_mean,
    certify,
    check_identity,
    corrected_midpoint,
    parse,
    remainder_integral,
    run_hh_sanity,
)


def test_identity_holds_through_order_six(corpus: Corpus) -> None:
    for entry in corpus.entries:
        f = parse(entry.expression)
        iv = Interval(entry.a, entry.b)
        for n in range(1, 7):
            result = check_identity(f, iv, n)
            tolerance = max(1e-9, 1e-9 * abs(result.reference))
            assert result.identity_residual <= tolerance, (entry.name, n)


@pytest.mark.parametrize(
    "source,a,b,n,reference,rule_value,actual_error,bound",
    [
        (
            "exp(x)",
            0,
            1,
            2,
            math.e - 1,
            math.exp(0.5),
            math.e - 1 - math.exp(0.5),
            (1 + math.e) / 48,
        ),
        ("x^2", 0, 1, 2, 1 / 3, 0.25, 1 / 12, 1 / 12),
        ("x^4", 0, 2, 3, 6.4, 6.0, 0.4, 2.0),
    ],
)
def test_closed_form(
    source: str,
    a: float,
    b: float,
    n: int,
    reference: float,
    rule_value: float,
    actual_error: float,
    bound: float,
) -> None:
    f = parse(source)
    iv = Interval(a, b)
    result = check_identity(f, iv, n)
    assert result.reference == pytest.approx(reference, rel=1e-9)
    assert result.rule_value == pytest.approx(rule_value, rel=1e-9)
    assert result.actual_error == pytest.approx(actual_error, rel=1e-9)
    convex = bound_convex(n, iv, EndpointDerivs.from_expression(f, iv, n))
    assert convex == pytest.approx(bound, rel=1e-9)
    assert result.actual_error <= convex * (1 + 1e-12) + 1e-12


def test_exp_domination_margin() -> None:
    f = parse("exp(x)")
    iv = Interval(0.0, 1.0)
    result = check_identity(f, iv, 2)
    bound = bound_convex(2, iv, EndpointDerivs.from_expression(f, iv, 2))
    assert bound - result.actual_error >= 0.0078


@pytest.mark.parametrize("n", range(1, 7))
def test_power_mean_at_one_is_convex(n: int) -> None:
    rng = np.random.default_rng(n)
    iv = Interval(0.0, 1.0)
    for a, b in rng.uniform(0.0, 10.0, size=(100, 2)):
        d = EndpointDerivs(float(a), float(b))
        assert bound_power_mean(n, iv, d, 1.0) == pytest.approx(
            bound_convex(n, iv, d), rel=1e-12
        )


def test_rule_is_exact_for_low_degree_polynomials() -> None:
    rng = np.random.default_rng(20)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        coefficients = rng.uniform(-1.0, 1.0, size=n)
        a, b = sorted(rng.uniform(-2.0, 2.0, size=2))
        iv = Interval(float(a), float(b))
        source = " + ".join(
            [repr(float(coefficients[0]))]
            + [f"({float(c)!r})*x^{k}" for k, c in enumerate(coefficients) if k > 0]
        )
        f = parse(source)
        antiderivative = Polynomial(coefficients).integ()
        exact = float(antiderivative(iv.b) - antiderivative(iv.a))
        scale = iv.length * sum(
            abs(c) * max(abs(iv.a), abs(iv.b)) ** k for k, c in enumerate(coefficients)
        )
        assert abs(remainder_integral(f, iv, n)) <= 1e-12 * scale
        assert corrected_midpoint(f, iv, n) == pytest.approx(
            exact, rel=1e-12, abs=1e-13 * scale
        )


def test_certified_bounds_dominate(corpus: Corpus) -> None:
    violations = list()
    for entry in corpus.entries:
        f = parse(entry.expression)
        iv = Interval(entry.a, entry.b)
        for n in range(1, 5):
            actual_error = check_identity(f, iv, n).actual_error
            d = EndpointDerivs.from_expression(f, iv, n)
            for report in all_bounds(n, iv, d, entry.q_grid):
                if not certify(f, iv, n, q=report.q_used).certified:
                    continue
                if actual_error > report.value * (1 + 1e-12) + 1e-12:
                    violations.append((entry.name, n, report))
    assert violations == []


@pytest.mark.parametrize("m", [1, 2, 3])
def test_even_order_adds_nothing(corpus: Corpus, m: int) -> None:
    for entry in corpus.entries:
        f = parse(entry.expression)
        iv = Interval(entry.a, entry.b)
        assert corrected_midpoint(f, iv, 2 * m) == corrected_midpoint(
            f, iv, 2 * m - 1
        ), entry.name


def test_mean_value_sandwich(corpus: Corpus) -> None:
    results = [run_hh_sanity(entry, corpus.config) for entry in corpus.entries]
    assert all(result.passed for result in results)
    applicable = [r for r in results if r.outcome is not SanityOutcome.NOT_APPLICABLE]
    assert [r.name for r in applicable] == [
        "exp",
        "square",
        "quartic",
        "reciprocal",
        "quartic-wide",
    ]
    for result in applicable:
        assert result.outcome is SanityOutcome.PASS
        assert result.midpoint_value <= result.mean_value <= result.endpoint_mean
        assert not math.isnan(result.mean_value)
