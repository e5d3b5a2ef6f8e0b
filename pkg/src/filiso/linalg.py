"""Exact rational matrices, canonical subspaces and p-local lattices.

Conventions
-----------
* Vectors are tuples of Fractions.  Matrices act on column vectors, so
  ``M.apply(v)`` is ``M v``; subspace and lattice bases are stored as rows.
* A :class:`Subspace` keeps its basis in reduced row-echelon form, which is
  unique, so equality and hashing are structural.
* Coordinates on a subspace ``W`` are the entries of a vector at the pivot
  columns of ``W``'s echelon basis.  The quotient ``V/W`` is modelled on the
  non-pivot columns: a vector is reduced modulo the echelon rows and its
  non-pivot entries are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, NotStableError, PrimeMismatch
from .scalars import Q, check_prime, vp

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(xs: Iterable) -> Vector:
    return tuple(Q(x) for x in xs)


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def kron_vec(a: Sequence, b: Sequence) -> Vector:
    return tuple(x * y for x in a for y in b)


# ---------------------------------------------------------------------------
# Row reduction


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row-echelon form of the row space, dropping zero rows."""
    mat = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    nrows = len(mat)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        inv = prow[c]
        if inv != 1:
            prow = [x / inv for x in prow]
            mat[r] = prow
        for i in range(nrows):
            if i != r:
                f = mat[i][c]
                if f:
                    row = mat[i]
                    mat[i] = [x - f * y if y else x for x, y in zip(row, prow)]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in mat[:r]), tuple(pivots)


def _int_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        out.append([int(x * den) for x in row])
    return out


def int_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination (mutates rows)."""
    mat = [r for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        a = prow[c]
        for i in range(rank + 1, len(mat)):
            b = mat[i][c]
            if b:
                row = [a * x - b * y for x, y in zip(mat[i], prow)]
                g = reduce(gcd, row)
                if g > 1:
                    row = [x // g for x in row]
                mat[i] = row
        rank += 1
        if rank == len(mat):
            break
    return rank


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return int_rank(_int_rows(rows))


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


# ---------------------------------------------------------------------------
# Matrices


@dataclass(frozen=True)
class Matrix:
    rows: tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionError("ragged matrix")

    @classmethod
    def of(cls, rows: Iterable[Iterable], ncols: int | None = None) -> "Matrix":
        rs = tuple(vec(r) for r in rows)
        if ncols is None:
            ncols = len(rs[0]) if rs else 0
        return cls(rs, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(unit_vector(n, i) for i in range(n)), n)

    @classmethod
    def diag(cls, entries: Iterable) -> "Matrix":
        es = [Q(e) for e in entries]
        n = len(es)
        return cls(tuple(tuple(es[i] if i == j else ZERO for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError("vector length does not match matrix")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError("incompatible shapes for product")
        cols = other.T.rows
        return Matrix(
            tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols) for r in self.rows),
            other.ncols,
        )

    def scale(self, c) -> "Matrix":
        c = Q(c)
        return Matrix(tuple(tuple(c * x for x in r) for r in self.rows), self.ncols)

    def kron(self, other: "Matrix") -> "Matrix":
        rows = tuple(kron_vec(r1, r2) for r1 in self.rows for r2 in other.rows)
        return Matrix(rows, self.ncols * other.ncols)

    def det(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.nrows
        mat = [list(r) for r in self.rows]
        d = ONE
        for c in range(n):
            piv = next((i for i in range(c, n) if mat[i][c]), None)
            if piv is None:
                return ZERO
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                d = -d
            a = mat[c][c]
            d *= a
            for i in range(c + 1, n):
                f = mat[i][c] / a
                if f:
                    mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
        return d

    def rank(self) -> int:
        return rank(self.rows)

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise DimensionError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(r) + list(unit_vector(n, i)) for i, r in enumerate(self.rows)]
        red, pivots = rref(aug, 2 * n)
        if len(red) < n or pivots[n - 1] != n - 1:
            raise ZeroDivisionError("matrix is singular")
        return Matrix(tuple(tuple(r[n:]) for r in red), n)

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.nrows

    def charpoly(self) -> list[Fraction]:
        """Monic characteristic polynomial, coefficients leading first.

        Faddeev-LeVerrier recursion; exact over Q.
        """
        n = self.nrows
        coeffs = [ONE]
        mk = Matrix(tuple(tuple(ZERO for _ in range(n)) for _ in range(n)), n)
        c_prev = ONE
        for k in range(1, n + 1):
            mk = self @ mk
            mk = Matrix(tuple(tuple(x + (c_prev if i == j else ZERO) for j, x in enumerate(r))
                              for i, r in enumerate(mk.rows)), n)
            amk = self @ mk
            tr = sum((amk.rows[i][i] for i in range(n)), ZERO)
            c_prev = -tr / k
            coeffs.append(c_prev)
        return coeffs

    def is_p_integral(self, p: int) -> bool:
        return all(x.denominator % p for r in self.rows for x in r)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# Subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n with its canonical (reduced echelon) basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...] = field(compare=False, hash=False, repr=False, default=())

    def __post_init__(self):
        if self.basis and len(self.pivots) != len(self.basis):
            piv = tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)
            object.__setattr__(self, "pivots", piv)

    @cached_property
    def int_basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(r) for r in _int_rows(self.basis))

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        red, pivots = rref(vs, ambient_dim)
        return cls(ambient_dim, red, pivots)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit_vector(n, i) for i in range(n)), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(indices))
        return cls(n, tuple(unit_vector(n, i) for i in idx), tuple(idx))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def is_full(self) -> bool:
        return len(self.basis) == self.ambient_dim

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def reduce(self, v: Sequence) -> list:
        """``v`` minus its echelon component along this subspace."""
        x = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = x[c]
            if f:
                x = [a - f * b if b else a for a, b in zip(x, row)]
        return x

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length mismatch")
        return not any(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim > self.dim:
            return False
        return all(self.contains_vector(b) for b in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_subspaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    # coordinate models -----------------------------------------------------

    def coords(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` (assumed to lie in the subspace)."""
        return tuple(v[c] for c in self.pivots)

    def embed(self, c: Sequence) -> Vector:
        out = [ZERO] * self.ambient_dim
        for coef, row in zip(c, self.basis):
            if coef:
                out = [a + coef * b for a, b in zip(out, row)]
        return tuple(out)

    def sub_in_coords(self, u: "Subspace") -> "Subspace":
        """Express a subspace ``u`` of this one in this subspace's coordinates."""
        self._check(u)
        if not self.contains(u):
            raise DimensionError("not a subspace of the given space")
        return Subspace.span((self.coords(b) for b in u.basis), self.dim)

    def from_coords(self, u: "Subspace") -> "Subspace":
        """Inverse of :meth:`sub_in_coords`."""
        if u.ambient_dim != self.dim:
            raise DimensionError("coordinate subspace has wrong ambient dimension")
        return Subspace.span((self.embed(b) for b in u.basis), self.ambient_dim)

    @property
    def complement_indices(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in piv)

    def project(self, v: Sequence) -> Vector:
        """Image of ``v`` in the quotient model of V / self."""
        x = self.reduce(v)
        return tuple(x[i] for i in self.complement_indices)

    def lift(self, u: Sequence) -> Vector:
        out = [ZERO] * self.ambient_dim
        for coef, i in zip(u, self.complement_indices):
            out[i] = coef
        return tuple(out)

    def image_in_quotient(self, u: "Subspace") -> "Subspace":
        """(u + self) / self in the quotient model."""
        self._check(u)
        q = self.ambient_dim - self.dim
        return Subspace.span((self.project(b) for b in u.basis), q)

    def preimage(self, u: "Subspace") -> "Subspace":
        """Preimage in V of a subspace of the quotient model V / self."""
        if u.ambient_dim != self.ambient_dim - self.dim:
            raise DimensionError("quotient subspace has wrong ambient dimension")
        return Subspace.span(list(self.basis) + [self.lift(b) for b in u.basis], self.ambient_dim)

    def apply(self, m: Matrix) -> "Subspace":
        return Subspace.span((m.apply(b) for b in self.basis), m.nrows)

    def transform_rows(self, m: Matrix) -> "Subspace":
        """Image under row-vector multiplication ``v -> v m``."""
        cols = m.T.rows
        return Subspace.span(
            (tuple(sum((a * b for a, b in zip(v, c) if a and b), ZERO) for c in cols) for v in self.basis),
            m.ncols,
        )

    def kron(self, other: "Subspace") -> "Subspace":
        return Subspace.span((kron_vec(a, b) for a in self.basis for b in other.basis),
                             self.ambient_dim * other.ambient_dim)

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, [{rows}])"


def intersect(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    if a.is_zero or b.is_zero:
        return Subspace.zero(a.ambient_dim)
    if a.contains(b):
        return b
    if b.contains(a):
        return a
    # solve x.A = y.B: left kernel of the stacked matrix [A; B]
    k = a.dim
    stacked = list(a.basis) + list(b.basis)
    cols = list(zip(*stacked))
    ker = nullspace(cols, len(stacked))
    vs = [a.embed(x[:k]) for x in ker]
    return Subspace.span(vs, a.ambient_dim)


def sum_subspaces(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    if a.contains(b):
        return a
    if b.contains(a):
        return b
    return Subspace.span(list(a.basis) + list(b.basis), a.ambient_dim)


def dim_sum(a: Subspace, b: Subspace) -> int:
    if a.is_zero:
        return b.dim
    if b.is_zero:
        return a.dim
    return int_rank([list(r) for r in a.int_basis] + [list(r) for r in b.int_basis])


def dim_intersection(a: Subspace, b: Subspace) -> int:
    a._check(b)
    if a.is_zero or b.is_zero:
        return 0
    return a.dim + b.dim - dim_sum(a, b)


def restrict_operator(m: Matrix, w: Subspace) -> Matrix:
    """Matrix of ``m`` on the invariant subspace ``w`` in ``w``'s coordinates."""
    if not m.is_square or m.nrows != w.ambient_dim:
        raise DimensionError("operator and subspace dimensions differ")
    cols = []
    for b in w.basis:
        img = m.apply(b)
        if not w.contains_vector(img):
            raise NotStableError("subspace not stable")
        cols.append(w.coords(img))
    k = w.dim
    return Matrix(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)), k)


def quotient_operator(m: Matrix, w: Subspace) -> Matrix:
    """Matrix of the operator induced by ``m`` on the quotient model V / w."""
    if not m.is_square or m.nrows != w.ambient_dim:
        raise DimensionError("operator and subspace dimensions differ")
    for b in w.basis:
        if not w.contains_vector(m.apply(b)):
            raise NotStableError("subspace not stable")
    n = w.ambient_dim
    cols = [w.project(m.apply(unit_vector(n, i))) for i in w.complement_indices]
    k = len(cols)
    return Matrix(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)), k)


# ---------------------------------------------------------------------------
# p-local integral linear algebra


def smith_exponents(m: Matrix, p: int) -> list[int]:
    """Valuations of the elementary divisors of a square invertible matrix over Z_(p).

    Pivot: entry of minimal valuation, ties broken by lowest row then column.
    Returned in elimination order, which is increasing.
    """
    check_prime(p)
    a = [list(r) for r in m.rows]
    n = len(a)
    out = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                x = a[i][j]
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise ZeroDivisionError("matrix is singular")
        v, i, j = best
        a[k], a[i] = a[i], a[k]
        for row in a:
            row[k], row[j] = row[j], row[k]
        piv = a[k][k]
        # row and column elimination with p-integral multipliers
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
        for j in range(k + 1, n):
            f = a[k][j] / piv
            if f:
                for row in a:
                    row[j] -= f * row[k]
        out.append(v)
    return out


def p_saturate(rows: Sequence[Sequence[Fraction]], p: int, ncols: int) -> list[Vector]:
    """Basis of (Q-span of rows) intersected with Z_(p)^n."""
    mat = [list(r) for r in rows if any(r)]
    red, _ = rref(mat, ncols)
    mat = [list(r) for r in red]
    done: list[tuple[list, int]] = []
    while mat:
        best = None
        for i, r in enumerate(mat):
            for j, x in enumerate(r):
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        _, i, j = best
        prow = mat.pop(i)
        piv = prow[j]
        prow = [x / piv for x in prow]
        mat = [[x - r[j] * y for x, y in zip(r, prow)] if r[j] else r for r in mat]
        mat = [r for r in mat if any(r)]
        done = [([x - r[j] * y for x, y in zip(r, prow)] if r[j] else r, c) for r, c in done]
        done.append((prow, j))
    return [tuple(r) for r, _ in done]


def p_hermite_basis(gens: Sequence[Sequence[Fraction]], p: int, ncols: int) -> list[Vector]:
    """A basis of the Z_(p)-module generated by ``gens`` (assumed of full rank)."""
    mat = [list(r) for r in gens if any(r)]
    out = []
    for c in range(ncols):
        cand = [(vp(r[c], p), i) for i, r in enumerate(mat) if r[c]]
        if not cand:
            continue
        _, i = min(cand)
        prow = mat.pop(i)
        piv = prow[c]
        mat = [[x - (r[c] / piv) * y for x, y in zip(r, prow)] if r[c] else r for r in mat]
        mat = [r for r in mat if any(r)]
        out.append(tuple(prow))
    if mat:
        raise ZeroDivisionError("generators are not reduced to a basis")
    return out


@dataclass(frozen=True, eq=False)
class Lattice:
    """A full-rank Z_(p)-lattice in Q^n, given by a basis (rows)."""

    basis: Matrix
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if not self.basis.is_square or not self.basis.is_invertible():
            raise DimensionError("lattice basis must be square and invertible")

    @classmethod
    def standard(cls, n: int, p: int) -> "Lattice":
        return cls(Matrix.identity(n), p)

    @classmethod
    def from_rows(cls, rows, p: int) -> "Lattice":
        return cls(Matrix.of(rows), p)

    @classmethod
    def generated_by(cls, gens: Sequence[Sequence[Fraction]], p: int, n: int) -> "Lattice":
        return cls(Matrix(tuple(p_hermite_basis(gens, p, n)), n), p)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def _check(self, other: "Lattice") -> None:
        if self.p != other.p:
            raise PrimeMismatch(f"prime mismatch: {self.p} vs {other.p}")
        if self.dim != other.dim:
            raise DimensionError("lattice dimension mismatch")

    def change_of_basis(self, other: "Lattice") -> Matrix:
        """Matrix expressing ``other``'s basis in this lattice's basis."""
        self._check(other)
        return other.basis @ self.basis.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        if self.p != other.p or self.dim != other.dim:
            return False
        g = self.change_of_basis(other)
        return g.is_p_integral(self.p) and g.inverse().is_p_integral(self.p)

    def __hash__(self):
        return hash((self.p, self.dim))

    def contains(self, other: "Lattice") -> bool:
        return self.change_of_basis(other).is_p_integral(self.p)

    def apply(self, m: Matrix) -> "Lattice":
        """Image ``m L`` for a linear map acting on column vectors."""
        return Lattice(Matrix(tuple(m.apply(b) for b in self.basis.rows), self.dim), self.p)

    def scale_p(self, k: int) -> "Lattice":
        return Lattice(self.basis.scale(Fraction(self.p) ** k), self.p)

    def intersect_subspace(self, w: Subspace) -> list[Vector]:
        """Z_(p)-basis of ``w`` intersected with the lattice."""
        if w.is_zero:
            return []
        binv = self.basis.inverse()
        coords = [tuple(sum((a * b for a, b in zip(v, c) if a and b), ZERO) for c in binv.T.rows)
                  for v in w.basis]
        sat = p_saturate(coords, self.p, self.dim)
        bt = self.basis.T.rows
        return [tuple(sum((a * b for a, b in zip(c, col) if a and b), ZERO) for col in bt) for c in sat]

    def canonical_key(self) -> tuple:
        """A hashable normal form: equal lattices have equal keys.

        Scale into Z_(p)^n, triangularize with pivots ``p^v`` and reduce the
        entries above each pivot to integers in ``[0, p^v)``.
        """
        p = self.p
        rows = [list(r) for r in self.basis.rows]
        s = -min(vp(x, p) for r in rows for x in r if x)
        scale = Fraction(p) ** s
        rows = [[x * scale for x in r] for r in rows]
        n = self.dim
        h: list[list[Fraction]] = []
        pv: list[int] = []
        for c in range(n):
            i = min((i for i, r in enumerate(rows) if r[c]), key=lambda i: vp(rows[i][c], p))
            prow = rows.pop(i)
            v = vp(prow[c], p)
            u = Fraction(p) ** v / prow[c]
            prow = [x * u for x in prow]
            rows = [[x - (r[c] / prow[c]) * y for x, y in zip(r, prow)] if r[c] else r for r in rows]
            h.append(prow)
            pv.append(v)
        for c in range(n):
            mod = p ** pv[c]
            for i in range(c):
                x = h[i][c]
                rep = x.numerator * pow(x.denominator, -1, mod) % mod if mod > 1 else 0
                q = (x - rep) / mod
                if q:
                    h[i] = [a - q * b for a, b in zip(h[i], h[c])]
        return (s, tuple(tuple(r) for r in h))

    def kron(self, other: "Lattice") -> "Lattice":
        if self.p != other.p:
            raise PrimeMismatch("prime mismatch")
        return Lattice(self.basis.kron(other.basis), self.p)

    def __repr__(self):
        return f"Lattice(p={self.p}, basis={[[str(x) for x in r] for r in self.basis.rows]})"


def relative_position(l1: Lattice, l2: Lattice) -> tuple[int, ...]:
    """Elementary-divisor exponents of ``l2`` relative to ``l1``, sorted decreasingly.

    ``relative_position(L, diag(p, 1) L) == (1, 0)``.
    """
    g = l1.change_of_basis(l2)
    return tuple(sorted(smith_exponents(g, l1.p), reverse=True))
