from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiso.errors import DimensionError
from filiso.filtration import (
    Filtration,
    Graduation,
    TypeVector,
    dist_sq,
    dominance_leq,
    fil_of_grad,
    graded_filtration,
    iota,
    quotient_filtration,
    restrict,
    scalar_product,
    scalar_product_via_graded,
    tensor_filtration,
    xi_filtration,
)
from filiso.generate import random_filtration
from filiso.linalg import Subspace, sum_subspaces, unit_vector

from conftest import rng_of, seeds

V2 = Subspace.full(2)
E1 = Subspace.span([[1, 0]], 2)
E2 = Subspace.span([[0, 1]], 2)


def jump(n, line, top=1, rest=0):
    return Filtration.from_steps(n, [(rest, Subspace.full(n)), (top, Subspace.span([line], n))])


# graduations ----------------------------------------------------------------------


def test_fil_of_grad_examples():
    g = Graduation(2, ((0, V2),))
    assert fil_of_grad(g) == Filtration.trivial(2)
    g = Graduation(2, ((0, E1), (1, E2)))
    assert fil_of_grad(g).breakpoints == ((0, V2), (1, E2))


@given(seeds)
def test_fil_of_grad_three_pieces(seed):
    rng = rng_of(seed)
    while True:
        vs = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        try:
            g = Graduation.from_lines(vs, [0, 1, 2][:3])
            break
        except ValueError:
            continue
    f = fil_of_grad(g)
    for gamma in (Fraction(-1), 0, Fraction(1, 2), 1, 2, 3):
        direct = Subspace.zero(3)
        for w, s in g.pieces:
            if w >= gamma:
                direct = sum_subspaces(direct, s)
        assert f.step(gamma) == direct


def test_iota_examples():
    g = Graduation(2, ((0, V2),))
    assert iota(g) == g
    g = Graduation(2, ((0, E1), (1, E2)))
    assert [w for w, _ in iota(g).pieces] == [-1, 0]
    assert iota(iota(g)) == g


def test_graduation_must_be_direct():
    with pytest.raises(ValueError):
        Graduation(2, ((0, E1), (1, E1)))


# degree, restriction, quotient ------------------------------------------------------------


def test_degree_examples():
    assert Filtration.trivial(3).degree() == 0
    assert Filtration(2, ((0, V2), (1, E2))).degree() == 1


def test_step_semantics():
    f = Filtration(2, ((0, V2), (1, E2)))
    assert f.step(-5) == V2
    assert f.step(0) == V2
    assert f.step(Fraction(1, 2)) == E2
    assert f.step(1) == E2
    assert f.step(2).is_zero


def test_restrict_examples():
    f = jump(2, [1, 1])
    r = restrict(f, E1)
    assert r == Filtration.trivial(1)
    assert r.degree() == 0
    assert restrict(f, V2) == f


def test_quotient_examples():
    f = jump(2, [1, 0])
    assert quotient_filtration(f, Subspace.zero(2)) == f
    assert quotient_filtration(f, V2).ambient_dim == 0
    assert quotient_filtration(f, E1) == Filtration.trivial(1)
    assert quotient_filtration(jump(2, [0, 1]), E1) == Filtration.trivial(1, 1)


@given(seeds, st.integers(1, 5))
def test_restrict_plus_quotient_degree(seed, n):
    rng = rng_of(seed)
    f = random_filtration(rng, n)
    w = Subspace.span([[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, n))], n)
    assert restrict(f, w).degree() + quotient_filtration(f, w).degree() == f.degree()


# scalar products ------------------------------------------------------------------


def test_scalar_product_with_trivial():
    f = jump(3, [1, 2, 3], 5, -2)
    assert scalar_product(f, Filtration.trivial(3)) == 0


def test_dist_sq_examples():
    f = jump(2, [1, 0])
    assert dist_sq(f, f) == 0
    g = jump(2, [0, 1])
    # |F|^2 = |G|^2 = 1 and <F, G> = 0 for transverse lines
    assert scalar_product(f, g) == 0
    assert dist_sq(f, g) == 2 * 1 - 2 * 0
    h = jump(2, [1, 1])
    assert scalar_product(f, h) == 0
    assert dist_sq(f, h) == 2


@given(seeds, st.integers(1, 5))
def test_scalar_product_formula_agreement(seed, n):
    rng = rng_of(seed)
    f, g = random_filtration(rng, n), random_filtration(rng, n)
    s = scalar_product(f, g)
    assert s == scalar_product_via_graded(f, g) == scalar_product_via_graded(g, f)
    assert s == scalar_product(g, f)


@given(seeds, st.integers(1, 5))
def test_norm_and_cauchy_schwarz(seed, n):
    rng = rng_of(seed)
    f, g = random_filtration(rng, n), random_filtration(rng, n)
    assert f.norm_sq() == scalar_product(f, f) == sum(x * x for x in f.type())
    assert scalar_product(f, g) ** 2 <= f.norm_sq() * g.norm_sq()
    assert dist_sq(f, g) >= 0


@given(seeds, st.integers(1, 4), st.fractions(0, 5, max_denominator=4).filter(lambda c: c > 0), st.fractions(-3, 3, max_denominator=4))
def test_scaling_and_shift(seed, n, c, t):
    rng = rng_of(seed)
    f, g = random_filtration(rng, n), random_filtration(rng, n)
    assert scalar_product(f.scale(c), g) == c * scalar_product(f, g)
    assert scalar_product(f.shift(t), g) == scalar_product(f, g) + t * g.degree()


def test_graded_filtration_pieces():
    f = Filtration(2, ((0, V2), (1, E1)))
    g = jump(2, [1, 1], 2)
    # the top piece is E1, on which G restricts trivially
    assert graded_filtration(f, 1, g) == Filtration.trivial(1)
    assert graded_filtration(f, 0, g) == Filtration.trivial(1, 2)


# tensor products -----------------------------------------------------------------


def test_tensor_examples():
    f = jump(2, [1, 2], 1)
    t = tensor_filtration(f, Filtration.trivial(1))
    assert t == f
    g = jump(2, [1, 0], 1)
    assert tensor_filtration(g, g).type() == TypeVector.of([2, 1, 1, 0])


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_tensor_degree_and_type(seed, n, m):
    rng = rng_of(seed)
    f, g = random_filtration(rng, n), random_filtration(rng, m)
    t = tensor_filtration(f, g)
    assert t.ambient_dim == n * m
    assert t.degree() == m * f.degree() + n * g.degree()
    assert t.type() == TypeVector.of(a + b for a in f.type() for b in g.type())


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_tensor_scalar_identity(seed, n, m):
    rng = rng_of(seed)
    f1, f2 = random_filtration(rng, n), random_filtration(rng, n)
    g1, g2 = random_filtration(rng, m), random_filtration(rng, m)
    lhs = scalar_product(tensor_filtration(f1, g1), tensor_filtration(f2, g2))
    rhs = (m * scalar_product(f1, f2) + n * scalar_product(g1, g2)
           + f1.degree() * g2.degree() + f2.degree() * g1.degree())
    assert lhs == rhs


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        scalar_product(Filtration.trivial(2), Filtration.trivial(3))


# dominance ----------------------------------------------------------------------


def test_dominance_examples():
    assert dominance_leq([1, 0], [1, 0])
    assert dominance_leq([1, 0], [0, 1])
    assert dominance_leq([Fraction(1, 2), Fraction(1, 2)], [1, 0])
    assert not dominance_leq([1, 0], [Fraction(1, 2), Fraction(1, 2)])
    assert not dominance_leq([1, 0], [1, 1])


@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=6))
def test_dominance_mean_is_minimal(xs):
    mean = sum(xs, Fraction(0)) / len(xs)
    assert dominance_leq([mean] * len(xs), xs)
    assert dominance_leq(xs, xs)


def test_xi_filtration_shape():
    w = Subspace.span([unit_vector(3, 0)], 3)
    xi = xi_filtration(3, w, -1, 1)
    assert xi.type() == TypeVector.of([1, -1, -1])
    assert xi_filtration(3, Subspace.zero(3), 0, 2) == Filtration.trivial(3)
