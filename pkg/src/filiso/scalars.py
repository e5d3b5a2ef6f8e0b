"""Exact rationals, p-adic valuations and Newton polygons.

Rationals are plain :class:`fractions.Fraction` values; they are always kept
in lowest terms with a positive denominator, which is exactly the canonical
form we need for structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import NotPrimeError, SingularFrobeniusError, ValuationError

Rational = Fraction


def Q(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def q_str(x: Fraction) -> str:
    """Canonical text form used in every JSON payload."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int) or not is_prime(p):
        raise NotPrimeError(f"{p!r} is not a prime")
    return p


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(x, p: int) -> int:
    """Exponent of ``p`` in the nonzero rational ``x``."""
    x = Q(x)
    if x == 0:
        raise ValuationError("valuation of zero")
    check_prime(p)
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_p_integral(x: Fraction, p: int) -> bool:
    return x.denominator % p != 0


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of ``(i, vp(a_i))`` for a monic ``x^n + a_1 x^{n-1} + ...``.

    ``slopes`` is sorted decreasingly with repetitions, so it is directly a
    type vector.
    """

    vertices: tuple[tuple[int, Fraction], ...]
    slopes: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.slopes)


def newton_polygon(monic_coeffs: Sequence, p: int) -> NewtonPolygon:
    """Newton polygon of a monic polynomial.

    ``monic_coeffs`` lists coefficients from the leading one down to the
    constant term, so ``[1, -3, 2]`` is ``x^2 - 3x + 2``.
    """
    check_prime(p)
    coeffs = [Q(c) for c in monic_coeffs]
    if not coeffs or coeffs[0] != 1:
        raise ValueError("polynomial must be monic (leading coefficient 1)")
    n = len(coeffs) - 1
    if n == 0:
        return NewtonPolygon(((0, Fraction(0)),), ())
    if coeffs[-1] == 0:
        raise SingularFrobeniusError("non-invertible Frobenius")
    points = [(i, Fraction(vp(c, p))) for i, c in enumerate(coeffs) if c != 0]

    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        # pop while the last turn is not strictly convex (lower hull)
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            x3, y3 = pt
            if (y2 - y1) * (x3 - x1) >= (y3 - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)

    slopes: list[Fraction] = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = (y2 - y1) / (x2 - x1)
        slopes.extend([s] * (x2 - x1))
    slopes.sort(reverse=True)
    return NewtonPolygon(tuple(hull), tuple(slopes))


def newton_slopes(monic_coeffs: Sequence, p: int) -> tuple[Fraction, ...]:
    """Slopes (with multiplicity, sorted decreasingly) of a monic polynomial.

    The multiset equals the valuations of the roots, and its sum is the
    valuation of the constant term.
    """
    return newton_polygon(monic_coeffs, p).slopes


def poly_from_roots(roots: Iterable) -> list[Fraction]:
    """Monic coefficients (leading first) of prod (x - r)."""
    coeffs = [Fraction(1)]
    for r in roots:
        r = Q(r)
        nxt = coeffs + [Fraction(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= r * coeffs[i - 1]
        coeffs = nxt
    return coeffs
