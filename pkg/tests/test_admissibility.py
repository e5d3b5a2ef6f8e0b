from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiso.admissibility import (
    FilteredIsocrystal,
    check_scalar_inequalities,
    constructed_xis,
    hn_chain,
    hn_filtration,
    hn_pieces,
    hn_via_flags,
    is_semistable,
    is_weakly_admissible,
    is_weakly_admissible_generic,
    tensor_filtered,
    verify_hn_identity,
    xi_from,
)
from filiso.errors import NotStableError, SplitModelRequired
from filiso.filtration import Filtration, scalar_product
from filiso.generate import fixture_nonwa, fixture_ordinary, random_filtered
from filiso.isocrystal import invariant_subspaces, make_isocrystal
from filiso.linalg import Matrix, Subspace

from conftest import rng_of, seeds

E1 = Subspace.span([[1, 0]], 2)
E2 = Subspace.span([[0, 1]], 2)
V2 = Subspace.full(2)


def line_fil(v, top=1, rest=0):
    return Filtration.from_steps(2, [(rest, V2), (top, Subspace.span([v], 2))])


def diag(p, vals):
    return make_isocrystal(p, Matrix.diag(vals), vals, Matrix.identity(len(vals)))


# verdicts -----------------------------------------------------------------------


def test_wa_examples():
    assert is_weakly_admissible(fixture_ordinary()).admissible
    v = is_weakly_admissible(fixture_nonwa())
    assert not v.admissible
    assert v.witness == E1
    assert v.degrees == (1, 0)
    fi = FilteredIsocrystal(make_isocrystal(5, Matrix.identity(3)), Filtration.trivial(3))
    assert is_weakly_admissible(fi)


def test_degree_mismatch_reason():
    fi = FilteredIsocrystal(diag(3, [1, 3]), Filtration.trivial(2))
    v = is_weakly_admissible(fi)
    assert not v and v.reason == "degree mismatch" and v.witness == V2


def test_non_split_rejected():
    iso = make_isocrystal(3, [[0, 3], [1, 0]])
    fi = FilteredIsocrystal(iso, line_fil([1, 0]))
    with pytest.raises(SplitModelRequired, match="requires split model"):
        is_weakly_admissible(fi)
    with pytest.raises(SplitModelRequired):
        hn_filtration(fi)


def test_scalar_model_matches_split_reasoning():
    # phi = p Id: every line is stable, so a weight above 1 destabilizes
    iso = make_isocrystal(3, Matrix.diag([3, 3]))
    assert is_weakly_admissible(FilteredIsocrystal(iso, Filtration.trivial(2, 1)))
    bad = FilteredIsocrystal(iso, line_fil([1, 2], 2, 0))
    v = is_weakly_admissible(bad)
    assert not v and v.witness == Subspace.span([[1, 2]], 2)
    assert hn_filtration(bad).breakpoints == ((-1, V2), (1, Subspace.span([[1, 2]], 2)))
    assert verify_hn_identity(bad).holds


@given(seeds, st.integers(1, 5))
def test_enumeration_routes_agree(seed, n):
    fi = random_filtered(rng_of(seed), n)
    assert is_weakly_admissible(fi).admissible == is_weakly_admissible_generic(fi)


# scalar-product conditions ------------------------------------------------------------


def test_xi_evaluation_formula():
    fi = fixture_ordinary()
    for w in invariant_subspaces(fi.iso):
        for a, b in ((0, 1), (-1, 1), (0, 2), (Fraction(-1, 2), 3)):
            xi = xi_from(fi, w, a, b)
            lhs, rhs = check_scalar_inequalities(fi, xi)
            hw = fi.sub(w).hodge.degree() if not w.is_zero else 0
            nw = fi.sub(w).newton_fil.degree() if not w.is_zero else 0
            assert lhs == a * fi.hodge.degree() + (b - a) * hw
            assert rhs == a * fi.newton_fil.degree() + (b - a) * nw


def test_trivial_xi():
    assert check_scalar_inequalities(fixture_nonwa(), Filtration.trivial(2)) == (0, 0)


def test_xi_requires_stable():
    with pytest.raises(NotStableError):
        xi_from(fixture_ordinary(), Subspace.span([[1, 1]], 2), 0, 1)
    with pytest.raises(NotStableError):
        check_scalar_inequalities(fixture_ordinary(), line_fil([1, 1]))


@given(seeds, st.integers(2, 4))
def test_verdict_equals_scalar_conditions(seed, n):
    fi = random_filtered(rng_of(seed), n)
    wa = is_weakly_admissible(fi).admissible
    ok2 = ok3 = True
    for _, _, _, xi in constructed_xis(fi):
        h, nn = check_scalar_inequalities(fi, xi)
        opp = scalar_product(fi.newton_fil_opposed, xi)
        assert nn + opp == 0
        ok2 &= h <= nn
        ok3 &= h + opp <= 0
    assert wa == ok2 == ok3


# Harder-Narasimhan --------------------------------------------------------------


def test_hn_examples():
    assert hn_filtration(fixture_ordinary()) == Filtration.trivial(2)
    f = hn_filtration(fixture_nonwa())
    assert f.breakpoints == ((-1, V2), (1, E1))
    ident = verify_hn_identity(fixture_nonwa())
    assert (ident.hodge_term - ident.newton_term, ident.norm_sq) == (2, 2)
    assert verify_hn_identity(fixture_ordinary()).norm_sq == 0


@pytest.mark.parametrize("w,lam", [(0, 1), (2, 3), (Fraction(1, 2), 9), (-1, Fraction(1, 3))])
def test_rank_one_twist(w, lam):
    fi = FilteredIsocrystal(diag(3, [lam]), Filtration.trivial(1, w))
    from filiso.scalars import vp
    assert hn_filtration(fi) == Filtration.trivial(1, w - vp(lam, 3))


@given(seeds, st.integers(1, 5))
def test_hn_properties(seed, n):
    fi = random_filtered(rng_of(seed), n)
    f = hn_filtration(fi)
    assert f.is_trivial == is_weakly_admissible(fi).admissible
    assert verify_hn_identity(fi).holds
    assert f == hn_via_flags(fi)
    assert f.degree() == 0
    chain = hn_chain(fi)
    slopes = [c.slope for c in chain]
    assert all(a > b for a, b in zip(slopes, slopes[1:]))
    for slope, piece in hn_pieces(fi, chain):
        assert is_semistable(piece)
        assert piece.slope() == slope


def test_tensor_of_fixtures():
    a = fixture_ordinary()
    b = FilteredIsocrystal(diag(3, [2]), Filtration.trivial(1))
    t = tensor_filtered(a, b)
    assert t.dim == 2 and is_weakly_admissible(t)


@given(seeds)
def test_hn_of_tensor_is_tensor_of_hn(seed):
    from filiso.filtration import tensor_filtration
    rng = rng_of(seed)
    a = random_filtered(rng, rng.randint(1, 3))
    b = random_filtered(rng, rng.randint(1, 3), a.p)
    t = tensor_filtered(a, b)
    if not t.iso.is_split:
        return
    assert hn_filtration(t) == tensor_filtration(hn_filtration(a), hn_filtration(b))
