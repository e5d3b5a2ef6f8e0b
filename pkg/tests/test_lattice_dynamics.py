from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiso.admissibility import FilteredIsocrystal, is_weakly_admissible
from filiso.errors import IntegralWeightsRequired, PrimeMismatch
from filiso.filtration import Filtration
from filiso.generate import curated_fixtures, fixture_nonwa, fixture_suite, random_lattice
from filiso.isocrystal import make_isocrystal
from filiso.lattice_dynamics import (
    BOUNDED_EVIDENCE,
    DIVERGING,
    FIXED_POINT,
    alpha,
    is_strongly_divisible,
    orbit_probe,
    plus_op,
    sd_tensor_check,
)
from filiso.linalg import Lattice, Matrix, Subspace

from conftest import primes, rng_of, seeds

V2 = Subspace.full(2)


def test_plus_op_examples():
    p = 3
    lat = Lattice.from_rows([[1, 2], [0, 3]], p)
    assert plus_op(lat, Filtration.trivial(2)) == lat
    assert plus_op(lat, Filtration.trivial(2, 2)) == lat.scale_p(-2)
    f = Filtration.from_steps(2, [(0, V2), (1, Subspace.span([[1, 0]], 2))])
    assert plus_op(Lattice.standard(2, p), f) == Lattice.from_rows([[Fraction(1, 3), 0], [0, 1]], p)


def test_plus_op_requires_integral_weights():
    f = Filtration.trivial(2, Fraction(1, 2))
    with pytest.raises(IntegralWeightsRequired, match="Γ=Z required"):
        plus_op(Lattice.standard(2, 3), f)


@given(seeds, st.integers(1, 4), primes, st.integers(-3, 3))
def test_plus_op_central_shift(seed, n, p, c):
    lat = random_lattice(rng_of(seed), n, p)
    assert plus_op(lat, Filtration.trivial(n, c)) == lat.scale_p(-c)


def test_alpha_identity():
    fi = FilteredIsocrystal(make_isocrystal(5, Matrix.identity(3)), Filtration.trivial(3))
    lat = Lattice.from_rows([[1, 5, 0], [0, 1, 0], [2, 0, 25]], 5)
    assert alpha(fi, lat) == lat
    with pytest.raises(PrimeMismatch):
        alpha(fi, Lattice.standard(3, 3))


def test_strongly_divisible_examples():
    fi = fixture_suite()["newton_line"]
    assert is_strongly_divisible(fi, Lattice.standard(2, 3))
    # phi L = span(e1, 9 e2); F^1 = span e2 meets it in 9 e2, scaled to 3 e2
    assert is_strongly_divisible(fi, Lattice.from_rows([[1, 0], [0, 3]], 3))
    assert not is_strongly_divisible(fi, Lattice.from_rows([[1, 1], [0, 3]], 3))


@given(seeds)
def test_non_admissible_never_fixed(seed):
    fi = fixture_nonwa()
    lat = random_lattice(rng_of(seed), 2, fi.p)
    assert not is_strongly_divisible(fi, lat)


def test_orbit_from_fixed_start():
    fi = fixture_suite()["newton_line"]
    rep = orbit_probe(fi, Lattice.standard(2, 3))
    assert rep.status == FIXED_POINT and rep.steps == 0 and rep.trace == (0,)


@pytest.mark.parametrize("fx", curated_fixtures(), ids=lambda f: f.name)
def test_orbit_matches_verdict(fx):
    assert is_weakly_admissible(fx.fi).admissible == fx.admissible
    lats = [Lattice.standard(fx.fi.dim, fx.fi.p), random_lattice(rng_of(7), fx.fi.dim, fx.fi.p)]
    for lat in lats:
        rep = orbit_probe(fx.fi, lat)
        if fx.admissible:
            assert rep.status in (FIXED_POINT, BOUNDED_EVIDENCE)
            if rep.status == FIXED_POINT:
                assert alpha(fx.fi, rep.lattice) == rep.lattice
        else:
            assert rep.status == DIVERGING
            assert rep.trace[-1] > rep.radius_bound


def test_diverging_trace_grows_linearly():
    rep = orbit_probe(fixture_nonwa(), Lattice.standard(2, 3), radius_bound=30)
    assert rep.status == DIVERGING
    # each step scales e1 by 1/p and e2 by p
    assert rep.trace == tuple(range(0, 2 * len(rep.trace), 2))


def test_sd_tensor_examples():
    suite = fixture_suite()
    r1 = suite["rank1_p"]
    lat1 = Lattice.standard(1, 3)
    assert is_strongly_divisible(r1, lat1)
    assert sd_tensor_check(r1, lat1, r1, lat1)
    a, b = suite["newton_line"], suite["ordinary"]
    lb = orbit_probe(b, Lattice.standard(2, 3)).lattice
    assert lb is not None
    assert sd_tensor_check(a, Lattice.standard(2, 3), b, lb)
    with pytest.raises(ValueError):
        sd_tensor_check(a, Lattice.from_rows([[1, 1], [0, 3]], 3), b, lb)
