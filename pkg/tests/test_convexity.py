import math

import pytest

from hh_midpoint import DomainError, parse
from hh_midpoint.convexity import ConvexityTarget, certify, certify_function
from hh_midpoint.quadrature import Interval

UNIT = Interval(0.0, 1.0)


def test_convex_derivative_is_certified() -> None:
    certificate = certify(parse("x^4"), Interval(0.0, 2.0), 2)
    assert certificate.certified
    assert certificate.target is ConvexityTarget.ABS_DERIV
    assert certificate.q is None
    assert certificate.grid_points == 129


def test_concave_derivative_is_not_certified() -> None:
    assert not certify(parse("sin(x)"), Interval(0.0, math.pi), 2).certified


def test_power_of_derivative() -> None:
    certificate = certify(parse("exp(x)"), UNIT, 3, q=2.0, m=65)
    assert certificate.certified
    assert certificate.target is ConvexityTarget.ABS_DERIV_POW_Q
    assert certificate.q == 2.0
    assert certificate.grid_points == 65


def test_affine_derivative_has_no_defect() -> None:
    certificate = certify(parse("x^2"), UNIT, 1)
    assert certificate.certified
    assert certificate.max_violation <= 1e-12


@pytest.mark.parametrize("m", [3, 33, 129, 257])
def test_concave_derivative_fails_on_fine_grids(m: int) -> None:
    certificate = certify(parse("x^1.5"), Interval(0.25, 1.0), 1, m=m)
    assert not certificate.certified
    assert certificate.max_violation > certificate.tolerance


def test_looser_tolerance_keeps_certificates() -> None:
    f = parse("1/(1+x)")
    tight = certify(f, UNIT, 2, q=1.5, rel_tol=1e-12)
    loose = certify(f, UNIT, 2, q=1.5, rel_tol=1e-6)
    assert tight.certified
    assert loose.certified
    assert loose.tolerance > tight.tolerance
    assert loose.max_violation <= tight.max_violation or loose.max_violation < 0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_grid_too_small(m: int) -> None:
    with pytest.raises(DomainError):
        certify(parse("exp(x)"), UNIT, 1, m=m)


def test_q_below_one() -> None:
    with pytest.raises(DomainError):
        certify(parse("exp(x)"), UNIT, 1, q=0.5)


def test_domain_error_on_grid() -> None:
    with pytest.raises(DomainError):
        certify(parse("ln(x)"), Interval(-1.0, 1.0), 1)


def test_certify_function() -> None:
    assert certify_function(parse("exp(x)"), UNIT).certified
    assert certify_function(parse("x"), UNIT).certified
    certificate = certify_function(parse("-x^2"), UNIT)
    assert not certificate.certified
    assert certificate.target is ConvexityTarget.FUNCTION
