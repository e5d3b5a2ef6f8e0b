from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiso.errors import NotPrimeError, SingularFrobeniusError, ValuationError
from filiso.scalars import Q, check_prime, is_prime, newton_polygon, newton_slopes, poly_from_roots, q_str, vp

from conftest import nonzero_q, primes, small_q


def test_vp_examples():
    assert vp(12, 2) == 2
    assert vp(Fraction(3, 4), 2) == -2
    for p in (2, 3, 5, 7):
        assert vp(1, p) == 0


def test_vp_zero_errors():
    with pytest.raises(ValuationError, match="valuation of zero"):
        vp(0, 3)


@pytest.mark.parametrize("p", [0, 1, 4, 9, -3, 15])
def test_non_prime_rejected(p):
    with pytest.raises(NotPrimeError):
        check_prime(p)


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(nonzero_q, nonzero_q, primes)
def test_vp_multiplicative(a, b, p):
    assert vp(a * b, p) == vp(a, p) + vp(b, p)


@given(nonzero_q, nonzero_q, primes)
def test_vp_ultrametric(a, b, p):
    if a + b != 0:
        assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


@given(small_q)
def test_rational_string_roundtrip(x):
    assert Q(q_str(x)) == x


def test_q_parsing():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(-4) == -4
    assert q_str(Fraction(-2, 4)) == "-1/2"
    assert q_str(Fraction(5)) == "5"


def test_newton_polygon_examples():
    assert newton_slopes([1, -3, 2], 2) == (1, 0)
    for p in (2, 3, 5):
        assert newton_slopes([1, 0, -p], p) == (Fraction(1, 2), Fraction(1, 2))
    assert newton_slopes([1, -1], 7) == (0,)


def test_newton_polygon_vertices():
    poly = newton_polygon([1, 0, -3], 3)
    assert poly.vertices == ((0, 0), (2, 1))
    assert poly.degree == 2


def test_newton_polygon_errors():
    with pytest.raises(SingularFrobeniusError, match="non-invertible Frobenius"):
        newton_slopes([1, 2, 0], 3)
    with pytest.raises(ValueError):
        newton_slopes([2, 1], 3)


@given(st.lists(nonzero_q, min_size=1, max_size=6), primes)
def test_slopes_are_root_valuations(roots, p):
    slopes = newton_slopes(poly_from_roots(roots), p)
    assert list(slopes) == sorted((vp(r, p) for r in roots), reverse=True)
    assert sum(slopes) == sum(vp(r, p) for r in roots)
