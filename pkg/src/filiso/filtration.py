"""Q-filtrations and Q-graduations of finite dimensional Q-vector spaces.

A :class:`Filtration` is stored by its jumps: an increasing list of weights
``w_1 < ... < w_k`` with strictly decreasing steps ``V = S_1 > ... > S_k > 0``.
For an arbitrary weight ``g``, ``F^g`` is the step whose weight is the smallest
``w_i >= g``; it is ``V`` for ``g <= w_1`` and ``0`` for ``g > w_k``.  The
graded piece at ``w_i`` is ``S_i / S_{i+1}``.

Restriction to a subspace is expressed in the subspace's coordinates and
quotients in the complement-coordinate model, see :mod:`filiso.linalg`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, NotStableError
from .linalg import Matrix, Subspace, dim_intersection, intersect, sum_subspaces
from .scalars import Q

ZERO = Fraction(0)


@dataclass(frozen=True)
class TypeVector:
    """A decreasingly sorted vector of rationals (the type of a filtration)."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        es = tuple(Q(x) for x in self.entries)
        object.__setattr__(self, "entries", es)
        if any(a < b for a, b in zip(es, es[1:])):
            raise ValueError("type vector entries must be sorted decreasingly")

    @classmethod
    def of(cls, xs: Iterable) -> "TypeVector":
        return cls(tuple(sorted((Q(x) for x in xs), reverse=True)))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def total(self) -> Fraction:
        return sum(self.entries, ZERO)

    def __neg__(self) -> "TypeVector":
        return TypeVector.of(-x for x in self.entries)

    def __repr__(self):
        return "TypeVector(" + ", ".join(str(x) for x in self.entries) + ")"


def dominance_leq(a, b) -> bool:
    """Majorization: equal sums and every prefix sum of ``a`` at most that of ``b``.

    Both arguments are sorted decreasingly first.
    """
    xa = sorted((Q(x) for x in a), reverse=True)
    xb = sorted((Q(x) for x in b), reverse=True)
    if len(xa) != len(xb):
        raise DimensionError("dominance order needs vectors of equal length")
    sa = sb = ZERO
    for x, y in zip(xa, xb):
        sa += x
        sb += y
        if sa > sb:
            return False
    return sa == sb


@dataclass(frozen=True)
class Filtration:
    ambient_dim: int
    breakpoints: tuple[tuple[Fraction, Subspace], ...]

    def __post_init__(self):
        n = self.ambient_dim
        bps = tuple((Q(w), s) for w, s in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if n == 0:
            if bps:
                raise ValueError("the zero space carries no breakpoints")
            return
        if not bps:
            raise ValueError("a filtration of a nonzero space needs a breakpoint")
        for _, s in bps:
            if s.ambient_dim != n:
                raise DimensionError("step lives in the wrong ambient space")
        if not bps[0][1].is_full:
            raise ValueError("first step must be the whole space")
        if bps[-1][1].is_zero:
            raise ValueError("last step must be nonzero")
        for (w1, s1), (w2, s2) in zip(bps, bps[1:]):
            if not w1 < w2:
                raise ValueError("weights must be strictly increasing")
            if not (s2.dim < s1.dim and s1.contains(s2)):
                raise ValueError("steps must be strictly decreasing")

    # construction ----------------------------------------------------------

    @classmethod
    def trivial(cls, n: int, weight=0) -> "Filtration":
        """The filtration with a single jump: ``V`` sits in weight ``weight``."""
        if n == 0:
            return cls(0, ())
        return cls(n, ((Q(weight), Subspace.full(n)),))

    @classmethod
    def from_steps(cls, n: int, pairs: Iterable[tuple]) -> "Filtration":
        """Normalize arbitrary ``(weight, step)`` pairs of a descending flag.

        Pairs are sorted by weight; a pair whose step coincides with the next
        one carries no graded piece and is dropped, as are zero steps.  The
        step at the smallest weight must be the whole space.
        """
        ps = sorted(((Q(w), s) for w, s in pairs), key=lambda t: t[0])
        out: list[tuple[Fraction, Subspace]] = []
        for i, (w, s) in enumerate(ps):
            if i + 1 < len(ps) and ps[i + 1][0] == w:
                raise ValueError("duplicate weight in flag")
            if s.is_zero:
                continue
            if i + 1 < len(ps) and ps[i + 1][1] == s:
                continue
            out.append((w, s))
        return cls(n, tuple(out))

    @classmethod
    def from_flag(cls, weights: Sequence, vectors: Sequence[Sequence], mults: Sequence[int] | None = None
                  ) -> "Filtration":
        """Filtration whose piece of weight ``w_j`` (decreasing) is spanned by the next ``m_j`` rows.

        ``weights`` is a type vector (sorted decreasingly, repetitions allowed)
        and ``vectors`` a basis of V; ``F^w`` is spanned by the rows attached
        to weights ``>= w``.
        """
        ws = [Q(w) for w in weights]
        if mults is not None:
            ws = [w for w, m in zip(ws, mults) for _ in range(m)]
        n = len(ws)
        if len(vectors) != n:
            raise DimensionError("need one vector per weight")
        if any(a < b for a, b in zip(ws, ws[1:])):
            raise ValueError("weights must be sorted decreasingly")
        pairs = []
        for w in sorted(set(ws)):
            k = sum(1 for x in ws if x >= w)
            pairs.append((w, Subspace.span(vectors[:k], n)))
        return cls.from_steps(n, pairs)

    # accessors --------------------------------------------------------------

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self.breakpoints)

    @property
    def steps(self) -> tuple[Subspace, ...]:
        return tuple(s for _, s in self.breakpoints)

    def step(self, gamma) -> Subspace:
        g = Q(gamma)
        for w, s in self.breakpoints:
            if w >= g:
                return s
        return Subspace.zero(self.ambient_dim)

    def next_step(self, i: int) -> Subspace:
        if i + 1 < len(self.breakpoints):
            return self.breakpoints[i + 1][1]
        return Subspace.zero(self.ambient_dim)

    def gr_dims(self) -> list[tuple[Fraction, int]]:
        out = []
        for i, (w, s) in enumerate(self.breakpoints):
            out.append((w, s.dim - self.next_step(i).dim))
        return out

    def degree(self) -> Fraction:
        return sum((w * d for w, d in self.gr_dims()), ZERO)

    def type(self) -> TypeVector:
        return TypeVector.of(w for w, d in self.gr_dims() for _ in range(d))

    def norm_sq(self) -> Fraction:
        return sum((w * w * d for w, d in self.gr_dims()), ZERO)

    @property
    def is_trivial(self) -> bool:
        """True for the zero filtration (everything in weight 0)."""
        return all(w == 0 for w in self.weights)

    def is_stable(self, op: Matrix) -> bool:
        return all(s.apply(op) == s for s in self.steps)

    # operations -------------------------------------------------------------

    def shift(self, c) -> "Filtration":
        c = Q(c)
        return Filtration(self.ambient_dim, tuple((w + c, s) for w, s in self.breakpoints))

    def scale(self, c) -> "Filtration":
        c = Q(c)
        if c <= 0:
            if c == 0:
                return Filtration.trivial(self.ambient_dim)
            raise ValueError("weights can only be scaled by a nonnegative factor")
        return Filtration(self.ambient_dim, tuple((c * w, s) for w, s in self.breakpoints))

    def restrict(self, w: Subspace) -> "Filtration":
        return restrict(self, w)

    def quotient(self, w: Subspace) -> "Filtration":
        return quotient_filtration(self, w)

    def transform(self, rows_map: Matrix) -> "Filtration":
        """Transport along ``v -> v M`` on row vectors (a change of coordinates)."""
        return Filtration.from_steps(rows_map.ncols,
                                     [(w, s.transform_rows(rows_map)) for w, s in self.breakpoints])

    def apply(self, op: Matrix) -> "Filtration":
        """Image filtration ``g F`` for an invertible ``g`` acting on column vectors."""
        return Filtration(self.ambient_dim, tuple((w, s.apply(op)) for w, s in self.breakpoints))

    def __repr__(self):
        parts = ", ".join(f"({w}, dim {s.dim})" for w, s in self.breakpoints)
        return f"Filtration(n={self.ambient_dim}, [{parts}])"


@dataclass(frozen=True)
class Graduation:
    ambient_dim: int
    pieces: tuple[tuple[Fraction, Subspace], ...]

    def __post_init__(self):
        ps = tuple(sorted(((Q(w), s) for w, s in self.pieces if not s.is_zero), key=lambda t: t[0]))
        object.__setattr__(self, "pieces", ps)
        ws = [w for w, _ in ps]
        if len(set(ws)) != len(ws):
            raise ValueError("graduation weights must be distinct")
        for _, s in ps:
            if s.ambient_dim != self.ambient_dim:
                raise DimensionError("piece lives in the wrong ambient space")
        total = Subspace.span([b for _, s in ps for b in s.basis], self.ambient_dim)
        if sum(s.dim for _, s in ps) != self.ambient_dim or not total.is_full:
            raise ValueError("pieces must form a direct sum decomposition of the space")

    @classmethod
    def from_lines(cls, vectors: Sequence[Sequence], weights: Sequence) -> "Graduation":
        """Group a basis into pieces by (rational) weight."""
        n = len(vectors)
        groups: dict[Fraction, list] = {}
        for v, w in zip(vectors, weights):
            groups.setdefault(Q(w), []).append(v)
        return cls(n, tuple((w, Subspace.span(vs, n)) for w, vs in groups.items()))

    def degree(self) -> Fraction:
        return sum((w * s.dim for w, s in self.pieces), ZERO)


def fil_of_grad(g: Graduation) -> Filtration:
    """``F^w`` is the sum of the pieces of weight ``>= w``."""
    n = g.ambient_dim
    pairs = []
    acc = Subspace.zero(n)
    for w, s in reversed(g.pieces):
        acc = sum_subspaces(acc, s)
        pairs.append((w, acc))
    return Filtration.from_steps(n, pairs)


def iota(g: Graduation) -> Graduation:
    """The opposed graduation: weights negated."""
    return Graduation(g.ambient_dim, tuple((-w, s) for w, s in g.pieces))


def degree(f: Filtration) -> Fraction:
    return f.degree()


def type_of(f: Filtration) -> TypeVector:
    return f.type()


def restrict(f: Filtration, w: Subspace) -> Filtration:
    """``F|W`` in the coordinates of ``W``."""
    if w.ambient_dim != f.ambient_dim:
        raise DimensionError("subspace and filtration live in different spaces")
    k = w.dim
    pairs = [(wt, w.sub_in_coords(intersect(s, w))) for wt, s in f.breakpoints]
    return Filtration.from_steps(k, pairs)


def restrict_degree(f: Filtration, w: Subspace) -> Fraction:
    """``deg(F|W)`` computed from intersection dimensions only."""
    dims = [dim_intersection(s, w) for s in f.steps] + [0]
    return sum((wt * (dims[i] - dims[i + 1]) for i, wt in enumerate(f.weights)), ZERO)


def quotient_filtration(f: Filtration, w: Subspace) -> Filtration:
    """Image filtration ``(F^g + W) / W`` on the complement-coordinate model of V/W."""
    if w.ambient_dim != f.ambient_dim:
        raise DimensionError("subspace and filtration live in different spaces")
    q = f.ambient_dim - w.dim
    pairs = [(wt, w.image_in_quotient(s)) for wt, s in f.breakpoints]
    return Filtration.from_steps(q, pairs)


def _check_same_space(f1: Filtration, f2: Filtration) -> None:
    if f1.ambient_dim != f2.ambient_dim:
        raise DimensionError(f"ambient dimension mismatch: {f1.ambient_dim} vs {f2.ambient_dim}")


def scalar_product(f1: Filtration, f2: Filtration) -> Fraction:
    """Double sum over pairs of jumps of ``g1 * g2 * dim`` of the bigraded piece."""
    _check_same_space(f1, f2)
    s1 = list(f1.steps)
    s2 = list(f2.steps)
    k1, k2 = len(s1), len(s2)
    # D[i][j] = dim(S1_i & S2_j), with a zero row/column appended
    D = [[0] * (k2 + 1) for _ in range(k1 + 1)]
    for i, a in enumerate(s1):
        for j, b in enumerate(s2):
            D[i][j] = dim_intersection(a, b)
    total = ZERO
    for i, w1 in enumerate(f1.weights):
        for j, w2 in enumerate(f2.weights):
            d = D[i][j] - D[i + 1][j] - D[i][j + 1] + D[i + 1][j + 1]
            if d:
                total += w1 * w2 * d
    return total


def graded_filtration(f1: Filtration, i: int, f2: Filtration) -> Filtration:
    """Filtration induced by ``f2`` on the ``i``-th graded piece of ``f1``."""
    top = f1.steps[i]
    below = top.sub_in_coords(f1.next_step(i))
    return quotient_filtration(restrict(f2, top), below)


def scalar_product_via_graded(f1: Filtration, f2: Filtration) -> Fraction:
    """``sum_g g * deg Gr^g_{f1}(f2)`` using explicit subquotients."""
    _check_same_space(f1, f2)
    return sum((w * graded_filtration(f1, i, f2).degree() for i, w in enumerate(f1.weights)), ZERO)


def norm_sq(f: Filtration) -> Fraction:
    return f.norm_sq()


def dist_sq(f1: Filtration, f2: Filtration) -> Fraction:
    """Squared CAT(0) distance ``|F1|^2 + |F2|^2 - 2 <F1, F2>``."""
    _check_same_space(f1, f2)
    return f1.norm_sq() + f2.norm_sq() - 2 * scalar_product(f1, f2)


def tensor_filtration(f1: Filtration, f2: Filtration) -> Filtration:
    """``(F1 x F2)^g = sum over g1 + g2 >= g of F1^g1 (x) F2^g2`` in Kronecker coordinates."""
    n = f1.ambient_dim * f2.ambient_dim
    if n == 0:
        return Filtration(0, ())
    b1, b2 = f1.breakpoints, f2.breakpoints
    kr = {(i, j): a.kron(b) for i, (_, a) in enumerate(b1) for j, (_, b) in enumerate(b2)}
    sums = sorted({w1 + w2 for w1, _ in b1 for w2, _ in b2})
    pairs = []
    for g in sums:
        acc = Subspace.zero(n)
        for i, (w1, _) in enumerate(b1):
            # the smallest admissible j for this i gives the largest term
            for j, (w2, _) in enumerate(b2):
                if w1 + w2 >= g:
                    acc = sum_subspaces(acc, kr[(i, j)])
                    break
        pairs.append((g, acc))
    return Filtration.from_steps(n, pairs)


def xi_filtration(n: int, w: Subspace, a, b) -> Filtration:
    """``V`` in weights ``<= a``, ``W`` in ``(a, b]`` and ``0`` above ``b``."""
    a, b = Q(a), Q(b)
    if a > b:
        raise ValueError("need a <= b")
    if a == b or w.is_zero:
        return Filtration.trivial(n, a)
    if w.is_full:
        return Filtration.trivial(n, b)
    return Filtration(n, ((a, Subspace.full(n)), (b, w)))


def check_stable(f: Filtration, op: Matrix) -> None:
    for s in f.steps:
        if s.apply(op) != s:
            raise NotStableError("filtration step is not stable under the operator")
