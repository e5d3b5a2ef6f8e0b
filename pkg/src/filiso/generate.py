"""Seeded random instances and the curated fixture suite.

Every generator takes an explicit ``random.Random`` so campaigns are
reproducible from a single seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .admissibility import FilteredIsocrystal, degree_table
from .filtration import Filtration, TypeVector
from .isocrystal import Isocrystal, make_isocrystal, split_from_eigen
from .linalg import Lattice, Matrix, Subspace, int_rank, unit_vector

PRIMES = (2, 3, 5)


def derive_seed(seed: int, index: int) -> int:
    """Per-trial seed, independent of evaluation order."""
    return random.Random(f"{seed}:{index}").getrandbits(63)


def _unit(rng: random.Random, p: int) -> int:
    while True:
        u = rng.choice((1, 1, 2, 3, 4, 5, 7))
        if u % p:
            return u * rng.choice((1, -1))


def random_int_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> list[list[int]]:
    while True:
        rows = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        if int_rank(rows) == n:
            return rows


def random_unimodular_at_p(rng: random.Random, n: int, p: int) -> Matrix:
    while True:
        m = Matrix.of(random_int_matrix(rng, n, -2, 2))
        d = m.det()
        if d.numerator % p:
            return m


def random_eigen_data(rng: random.Random, n: int, p: int, vals=(-1, 2)) -> list[Fraction]:
    lams: list[Fraction] = []
    while len(lams) < n:
        e = rng.randint(*vals)
        lam = Fraction(p) ** e * _unit(rng, p)
        if lam not in lams:
            lams.append(lam)
    return lams


def random_split_isocrystal(rng: random.Random, n: int, p: int | None = None, vals=(-1, 2),
                            diagonal: bool = False) -> Isocrystal:
    p = p or rng.choice(PRIMES)
    lams = random_eigen_data(rng, n, p, vals)
    if diagonal:
        basis = [list(unit_vector(n, i)) for i in range(n)]
    else:
        basis = random_int_matrix(rng, n, -2, 2)
    return split_from_eigen(p, lams, basis)


def random_invertible_isocrystal(rng: random.Random, n: int, p: int | None = None) -> Isocrystal:
    """An arbitrary invertible rational Frobenius, without split data."""
    p = p or rng.choice(PRIMES)
    while True:
        rows = [[Fraction(rng.randint(-9, 9) * p ** rng.randint(0, 2), rng.choice((1, 1, 2, 3, p)))
                 for _ in range(n)] for _ in range(n)]
        m = Matrix.of(rows)
        if m.det() != 0:
            return make_isocrystal(p, m)


# types and flags ------------------------------------------------------------


def random_weights(rng: random.Random, n: int, lo: int = -2, hi: int = 2, rational: bool = False) -> list[Fraction]:
    den = rng.choice((2, 3)) if rational else 1
    return sorted((Fraction(rng.randint(lo * den, hi * den), den) for _ in range(n)), reverse=True)


def hodge_type_for(rng: random.Random, nu: TypeVector, rational: bool = False, moves: int | None = None) -> TypeVector:
    """A type with the same total as ``nu``, pushed upwards in the dominance order.

    Each move transfers mass from a smaller entry to a larger one, which keeps
    ``nu <= mu``.  Rounding to integers (or to a fixed denominator) may break
    dominance; such types produce the non-admissible part of the corpus.
    """
    mu = [Fraction(x) for x in nu]
    n = len(mu)
    den = rng.choice((2, 3)) if rational else 1
    if n > 1:
        for _ in range(rng.randint(0, 3) if moves is None else moves):
            i, j = sorted(rng.sample(range(n), 2))
            mu[i] += Fraction(1, den)
            mu[j] -= Fraction(1, den)
    # round to the denominator while preserving the total
    total = sum(mu)
    out = [Fraction(round(x * den), den) for x in mu]
    out[-1] += total - sum(out)
    return TypeVector.of(out)


def _special_vector(rng: random.Random, iso: Isocrystal):
    rows = iso.split.eigbasis.rows if iso.split is not None else [unit_vector(iso.dim, i) for i in range(iso.dim)]
    k = rng.choice((1, 1, 2))
    picks = rng.sample(range(len(rows)), min(k, len(rows)))
    return [sum((rows[i][c] for i in picks), Fraction(0)) for c in range(iso.dim)]


def random_flag_vectors(rng: random.Random, iso: Isocrystal, special: float = 0.3) -> list[list[Fraction]]:
    n = iso.dim
    while True:
        rows = []
        for _ in range(n):
            if rng.random() < special:
                rows.append(_special_vector(rng, iso))
            else:
                rows.append([Fraction(rng.randint(-3, 3)) for _ in range(n)])
        if Matrix.of(rows).rank() == n:
            return rows


def random_hodge(rng: random.Random, iso: Isocrystal, mu: TypeVector | None = None, special: float = 0.3
                 ) -> Filtration:
    if mu is None:
        mu = TypeVector.of(random_weights(rng, iso.dim))
    return Filtration.from_flag(list(mu), random_flag_vectors(rng, iso, special))


def random_filtered(rng: random.Random, n: int, p: int | None = None, rational: bool | None = None,
                    special: float | None = None, vals=(-1, 2)) -> FilteredIsocrystal:
    """A random split filtered isocrystal whose Hodge type has the Newton total."""
    iso = random_split_isocrystal(rng, n, p, vals, diagonal=rng.random() < 0.3)
    nu = TypeVector.of(iso.split.valuations(iso.p))
    if rational is None:
        rational = rng.random() < 0.2
    mu = hodge_type_for(rng, nu, rational)
    if special is None:
        special = rng.choice((0.0, 0.2, 0.5))
    return FilteredIsocrystal(iso, random_hodge(rng, iso, mu, special))


def random_filtration(rng: random.Random, n: int, rational: bool = True) -> Filtration:
    """Random flag mixing generic vectors and coordinate vectors (to force coincidences)."""
    while True:
        rows = []
        for _ in range(n):
            if rng.random() < 0.35:
                rows.append([int(x) for x in unit_vector(n, rng.randrange(n))])
            else:
                rows.append([rng.randint(-2, 2) for _ in range(n)])
        if int_rank(rows) == n:
            break
    ws = random_weights(rng, n, -3, 3, rational and rng.random() < 0.4)
    return Filtration.from_flag(ws, rows)


def random_lattice(rng: random.Random, n: int, p: int) -> Lattice:
    """``U1 diag(p^e) U2`` with ``U1, U2`` invertible over Z_(p) and ``e`` in ``[-3, 3]``."""
    u1 = random_unimodular_at_p(rng, n, p)
    u2 = random_unimodular_at_p(rng, n, p)
    d = Matrix.diag([Fraction(p) ** rng.randint(-3, 3) for _ in range(n)])
    return Lattice(u1 @ d @ u2, p)


# phi-stable test filtrations -------------------------------------------------


def random_stable_xi(rng: random.Random, fi: FilteredIsocrystal, wa_only: bool = False, table=None) -> Filtration:
    """A random filtration by spans of eigenvectors.

    With ``wa_only`` the steps are drawn from the subspaces whose Hodge and
    Newton degrees agree, which in a weakly admissible object are exactly
    the weakly admissible subobjects.
    """
    t = table or degree_table(fi)
    n = t.n
    pool = [m for m in range(1, t.full) if not wa_only or t.dH[m] == t.dN[m]]
    rng.shuffle(pool)
    chain = [t.full]
    for m in pool:
        if len(chain) > 3:
            break
        # keep the chain totally ordered by inclusion
        if all((m & c) == m or (m & c) == c for c in chain):
            chain.append(m)
    chain.sort(key=lambda m: bin(m).count("1"), reverse=True)
    den = rng.choice((1, 1, 2, 3))
    ws = sorted(rng.sample(range(-4 * den, 4 * den + 1), len(chain)))
    return Filtration.from_steps(n, [(Fraction(w, den), t.subspace(m)) for w, m in zip(ws, chain)])


# curated fixtures -----------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    fi: FilteredIsocrystal
    admissible: bool  # derived by hand, re-derived by enumeration in the tests


def _flag(n: int, weights, vectors) -> Filtration:
    return Filtration.from_flag(weights, vectors)


def _diag(p: int, vals) -> Isocrystal:
    n = len(vals)
    return split_from_eigen(p, vals, [list(unit_vector(n, i)) for i in range(n)])


def _line(n: int, v, top, rest) -> Filtration:
    """Weight ``top`` on the line ``v`` and ``rest`` on V."""
    return Filtration.from_steps(n, [(rest, Subspace.full(n)), (top, Subspace.span([v], n))])


def fixture_ordinary(p: int = 3) -> FilteredIsocrystal:
    return FilteredIsocrystal(_diag(p, [1, p]), _line(2, [1, 1], 1, 0))


def fixture_nonwa(p: int = 3) -> FilteredIsocrystal:
    return FilteredIsocrystal(_diag(p, [1, p]), _line(2, [1, 0], 1, 0))


def fixture_identity_counterexample(p: int = 3) -> FilteredIsocrystal:
    """``phi = id`` with Hodge type ``(1, -1)``: never admissible."""
    return FilteredIsocrystal(make_isocrystal(p, Matrix.identity(2)), _line(2, [1, 0], 1, -1))


def curated_fixtures() -> list[Fixture]:
    fx = [
        Fixture("ordinary", fixture_ordinary(), True),
        Fixture("nonwa", fixture_nonwa(), False),
        Fixture("newton_line", FilteredIsocrystal(_diag(3, [1, 3]), _line(2, [0, 1], 1, 0)), True),
        Fixture("rank1_p", FilteredIsocrystal(_diag(3, [3]), Filtration.trivial(1, 1)), True),
        Fixture("rank1_mismatch", FilteredIsocrystal(_diag(3, [9]), Filtration.trivial(1, 1)), False),
        Fixture("rank1_unit", FilteredIsocrystal(_diag(5, [-1]), Filtration.trivial(1, 0)), True),
        Fixture("identity_counterexample", fixture_identity_counterexample(), False),
        Fixture("identity_trivial", FilteredIsocrystal(make_isocrystal(3, Matrix.identity(2)),
                                                       Filtration.trivial(2)), True),
        Fixture("scalar_p", FilteredIsocrystal(make_isocrystal(5, Matrix.diag([5, 5])),
                                               Filtration.trivial(2, 1)), True),
        Fixture("dim3_generic", FilteredIsocrystal(_diag(2, [1, 2, 4]),
                                                   _flag(3, [2, 1, 0], [[1, 1, 1], [1, 2, 3], [0, 0, 1]])), True),
        Fixture("dim3_eigenline", FilteredIsocrystal(_diag(2, [1, 2, 4]),
                                                     _flag(3, [2, 1, 0], [[1, 0, 0], [1, 1, 1], [0, 0, 1]])), False),
        Fixture("balanced", FilteredIsocrystal(_diag(3, [Fraction(1, 3), 3]), _line(2, [1, 1], 1, -1)), True),
        Fixture("balanced_eigenline", FilteredIsocrystal(_diag(3, [Fraction(1, 3), 3]), _line(2, [1, 0], 1, -1)),
                False),
        Fixture("skew_basis", FilteredIsocrystal(split_from_eigen(3, [1, 3], [[1, 1], [1, -1]]),
                                                 _line(2, [1, 0], 1, 0)), True),
        Fixture("skew_eigenline", FilteredIsocrystal(split_from_eigen(3, [1, 3], [[1, 1], [1, -1]]),
                                                     _line(2, [1, 1], 1, 0)), False),
        Fixture("dim3_plane", FilteredIsocrystal(_diag(3, [1, 3, -3]),
                                                 _flag(3, [1, 1, 0], [[1, 1, 1], [1, -1, 2], [0, 0, 1]])), True),
        Fixture("dim3_eigenplane", FilteredIsocrystal(_diag(3, [1, 3, -3]),
                                                      _flag(3, [1, 1, 0], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])), False),
        Fixture("dim3_spread", FilteredIsocrystal(_diag(5, [Fraction(1, 5), 1, 5]),
                                                  _flag(3, [1, 0, -1], [[1, 1, 1], [1, 2, 0], [0, 0, 1]])), True),
        Fixture("wide_hodge", FilteredIsocrystal(_diag(2, [1, 2]), _line(2, [1, 1], 2, -1)), True),
        Fixture("wide_eigenline", FilteredIsocrystal(_diag(2, [1, 2]), _line(2, [0, 1], 2, -1)), False),
        Fixture("shifted_unstable", FilteredIsocrystal(_diag(3, [1, 3, 9]), Filtration.trivial(3, 1)), False),
        Fixture("dim3_skew_generic", FilteredIsocrystal(
            split_from_eigen(5, [1, 5, 25], [[1, 1, 0], [0, 1, 1], [1, 0, 1]]),
            _flag(3, [3, 0, 0], [[1, 2, 3], [0, 1, 0], [0, 0, 1]])), True),
    ]
    return fx


def fixture_suite() -> dict[str, FilteredIsocrystal]:
    return {f.name: f.fi for f in curated_fixtures()}


def write_fixture_files(directory) -> list[str]:
    """Write every curated fixture as an instance file; returns the file names."""
    import json
    from pathlib import Path

    from .serialize import instance_to_json

    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    names = []
    docs = [(f"fixture_{f.name}", f.fi) for f in curated_fixtures()]
    for name, fi in docs:
        doc = instance_to_json(fi, name=name)
        (d / f"{name}.json").write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        names.append(f"{name}.json")
    return names
