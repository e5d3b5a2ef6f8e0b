"""Filtered isocrystals, weak admissibility and Harder-Narasimhan filtrations.

Every computation that quantifies over phi-stable subspaces goes through a
:class:`DegreeTable`: for a split isocrystal it lists, for each subset ``S``
of eigenlines, the Hodge degree ``deg(F_H | W_S)``, the Newton degree
``deg(F_N | W_S)`` and ``dim W_S``.  Hodge degrees are computed in
eigen-coordinates, where ``dim(F^g & W_S) = dim F^g - rank(B_g[:, not S])``
for an eigen-coordinate basis ``B_g`` of ``F^g``.  The slower generic route
(restrict, then take degrees) is kept in :func:`hodge_degree_on` and used by
the tests as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import (
    DimensionError,
    EnumerationBoundExceeded,
    InvariantViolation,
    NotStableError,
    SplitModelRequired,
)
from .filtration import (
    Filtration,
    restrict,
    scalar_product,
    tensor_filtration,
    xi_filtration,
)
from .isocrystal import (
    DEFAULT_ENUMERATION_BOUND,
    Isocrystal,
    deg_newton_on,
    eigen_subspace,
    is_stable,
    newton_filtration,
    newton_filtration_opposed,
    tensor_isocrystal,
)
from .linalg import Subspace, _int_rows, int_rank
from .scalars import vp

ZERO = Fraction(0)


@dataclass(frozen=True)
class FilteredIsocrystal:
    iso: Isocrystal
    hodge: Filtration

    def __post_init__(self):
        if self.iso.dim == 0:
            raise DimensionError("the zero isocrystal has no slope")
        if self.hodge.ambient_dim != self.iso.dim:
            raise DimensionError("Hodge filtration and isocrystal live in different spaces")

    @property
    def dim(self) -> int:
        return self.iso.dim

    @property
    def p(self) -> int:
        return self.iso.p

    @property
    def newton_fil(self) -> Filtration:
        return newton_filtration(self.iso)

    @property
    def newton_fil_opposed(self) -> Filtration:
        return newton_filtration_opposed(self.iso)

    def slope(self) -> Fraction:
        """``(deg F_H - deg F_N) / dim``."""
        return (self.hodge.degree() - deg_newton_on(self.iso, Subspace.full(self.dim))) / self.dim

    def sub(self, w: Subspace) -> "FilteredIsocrystal":
        return FilteredIsocrystal(self.iso.sub(w), restrict(self.hodge, w))

    def quotient(self, w: Subspace) -> "FilteredIsocrystal":
        return FilteredIsocrystal(self.iso.quotient(w), self.hodge.quotient(w))

    def subquotient(self, upper: Subspace, lower: Subspace) -> "FilteredIsocrystal":
        """``upper / lower`` for stable ``lower <= upper``."""
        s = self.sub(upper)
        return s.quotient(upper.sub_in_coords(lower))


def tensor_filtered(a: FilteredIsocrystal, b: FilteredIsocrystal) -> FilteredIsocrystal:
    return FilteredIsocrystal(tensor_isocrystal(a.iso, b.iso), tensor_filtration(a.hodge, b.hodge))


# ---------------------------------------------------------------------------
# degree tables


@dataclass
class DegreeTable:
    """Per-subset Hodge/Newton degrees of a split filtered isocrystal."""

    fi: FilteredIsocrystal
    dH: list[Fraction]
    dN: list[Fraction]
    dims: list[int]

    @property
    def n(self) -> int:
        return self.fi.dim

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def subspace(self, mask: int) -> Subspace:
        return eigen_subspace(self.fi.iso, mask)

    def masks(self) -> list[int]:
        """Subsets in a deterministic order: by size, then by index set."""
        return sorted(range(1 << self.n), key=lambda m: (bin(m).count("1"), m))


def degree_table(fi: FilteredIsocrystal, bound: int = DEFAULT_ENUMERATION_BOUND) -> DegreeTable:
    iso = fi.iso
    split = iso.require_split("quantifying over phi-stable subspaces")
    n = iso.dim
    if n > bound:
        raise EnumerationBoundExceeded(f"enumeration bound exceeded: dim {n} > {bound}")
    vals = split.valuations(iso.p)
    to_eig = split.eigbasis.inverse()  # row v (standard) -> v E^{-1} (eigen coordinates)
    steps = []
    for w, s in fi.hodge.breakpoints:
        eig_rows = [tuple(sum((a * b for a, b in zip(v, col) if a and b), ZERO) for col in to_eig.T.rows)
                    for v in s.basis]
        steps.append((w, s.dim, _int_rows(eig_rows)))
    size = 1 << n
    dH = [ZERO] * size
    dN = [ZERO] * size
    dims = [0] * size
    for m in range(size):
        comp = [j for j in range(n) if not m >> j & 1]
        inter = []
        for _, d, rows in steps:
            if not comp:
                inter.append(d)
            else:
                inter.append(d - int_rank([[r[j] for j in comp] for r in rows]))
        inter.append(0)
        dH[m] = sum((w * (inter[i] - inter[i + 1]) for i, (w, _, _) in enumerate(steps)), ZERO)
        dN[m] = Fraction(sum(vals[j] for j in range(n) if m >> j & 1))
        dims[m] = bin(m).count("1")
    return DegreeTable(fi, dH, dN, dims)


def hodge_degree_on(fi: FilteredIsocrystal, w: Subspace) -> Fraction:
    """``deg(F_H | W)`` through an explicit restriction."""
    return restrict(fi.hodge, w).degree()


# ---------------------------------------------------------------------------
# weak admissibility


@dataclass(frozen=True)
class WaVerdict:
    admissible: bool
    witness: Subspace | None = None
    degrees: tuple[Fraction, Fraction] | None = None  # (deg F_H|W, deg F_N|W) at the witness
    reason: str = ""

    def __bool__(self):
        return self.admissible


def _scalar_verdict(fi: FilteredIsocrystal) -> WaVerdict:
    c = vp(fi.iso.scalar, fi.p)
    n = fi.dim
    dh, dn = fi.hodge.degree(), Fraction(c * n)
    if dh != dn:
        return WaVerdict(False, Subspace.full(n), (dh, dn), "degree mismatch")
    # every subspace is stable: the top Hodge step is the worst one
    w_top, s_top = fi.hodge.breakpoints[-1]
    if w_top > c:
        return WaVerdict(False, s_top, (w_top * s_top.dim, Fraction(c * s_top.dim)), "destabilizing subspace")
    return WaVerdict(True)


def is_weakly_admissible(fi: FilteredIsocrystal, table: DegreeTable | None = None) -> WaVerdict:
    """Exact verdict by enumeration of the phi-stable subspaces."""
    if not fi.iso.is_split and fi.iso.scalar is not None:
        return _scalar_verdict(fi)
    t = table or degree_table(fi)
    full = t.full
    if t.dH[full] != t.dN[full]:
        return WaVerdict(False, Subspace.full(fi.dim), (t.dH[full], t.dN[full]), "degree mismatch")
    for m in t.masks():
        if t.dH[m] > t.dN[m]:
            return WaVerdict(False, t.subspace(m), (t.dH[m], t.dN[m]), "destabilizing subspace")
    return WaVerdict(True)


def is_weakly_admissible_generic(fi: FilteredIsocrystal, bound: int = DEFAULT_ENUMERATION_BOUND) -> bool:
    """Same verdict through restrictions and determinants (slow, for cross-checks)."""
    from .isocrystal import invariant_subspaces

    n = fi.dim
    v = Subspace.full(n)
    if hodge_degree_on(fi, v) != deg_newton_on(fi.iso, v):
        return False
    return all(hodge_degree_on(fi, w) <= deg_newton_on(fi.iso, w) for w in invariant_subspaces(fi.iso, bound))


def xi_from(fi: FilteredIsocrystal, w: Subspace, a, b) -> Filtration:
    """The two-step phi-stable filtration: V up to ``a``, ``W`` up to ``b``, then 0."""
    if not is_stable(fi.iso, w):
        raise NotStableError("subspace not stable")
    return xi_filtration(fi.dim, w, a, b)


def check_scalar_inequalities(fi: FilteredIsocrystal, xi: Filtration, require_stable: bool = True
                              ) -> tuple[Fraction, Fraction]:
    """``(<F_H, xi>, <F_N, xi>)``; weak admissibility means lhs <= rhs for stable ``xi``."""
    if require_stable:
        for s in xi.steps:
            if not is_stable(fi.iso, s):
                raise NotStableError("filtration step not stable")
    return scalar_product(fi.hodge, xi), scalar_product(fi.newton_fil, xi)


XI_PARAMS = ((0, 1), (-1, 1), (0, 2))


def constructed_xis(fi: FilteredIsocrystal, params: Iterable = XI_PARAMS) -> list[tuple[Subspace, Fraction, Fraction, Filtration]]:
    """All two-step filtrations built from stable subspaces and the given ``(a, b)``."""
    from .isocrystal import invariant_subspaces

    out = []
    for w in invariant_subspaces(fi.iso):
        for a, b in params:
            out.append((w, Fraction(a), Fraction(b), xi_filtration(fi.dim, w, a, b)))
    return out


# ---------------------------------------------------------------------------
# Harder-Narasimhan recursion


@dataclass(frozen=True)
class HNStep:
    slope: Fraction
    step: Subspace  # F^{slope}, a phi-stable subspace of V


def _destabilizer(t: DegreeTable, slope_of: Callable[[DegreeTable, int], Fraction | None]) -> tuple[int, Fraction]:
    best: list[int] = []
    best_slope = None
    for m in range(1, 1 << t.n):
        s = slope_of(t, m)
        if s is None:
            continue
        if best_slope is None or s > best_slope:
            best_slope, best = s, [m]
        elif s == best_slope:
            best.append(m)
    top = max(t.dims[m] for m in best)
    winners = [m for m in best if t.dims[m] == top]
    if len(winners) != 1:
        raise InvariantViolation(f"maximal destabilizing subobject is not unique: {winners}")
    winner = winners[0]
    # the maximal one must contain every other subobject of maximal slope
    for m in best:
        if m & ~winner:
            raise InvariantViolation("subobjects of maximal slope are not nested in the maximal one")
    return winner, best_slope


def _hn_chain(fi: FilteredIsocrystal, slope_of) -> list[HNStep]:
    """Generic HN recursion: destabilize, pass to the quotient, lift back."""
    chain: list[HNStep] = []
    acc = Subspace.zero(fi.dim)
    while True:
        cur = fi.quotient(acc) if not acc.is_zero else fi
        t = degree_table(cur)
        mask, slope = _destabilizer(t, slope_of)
        acc = acc.preimage(t.subspace(mask))
        chain.append(HNStep(slope, acc))
        if acc.is_full:
            return chain


def _chain_filtration(n: int, chain: list[HNStep]) -> Filtration:
    return Filtration.from_steps(n, [(c.slope, c.step) for c in chain])


def _hn_slope(t: DegreeTable, m: int) -> Fraction:
    return (t.dH[m] - t.dN[m]) / t.dims[m]


def hn_chain(fi: FilteredIsocrystal) -> list[HNStep]:
    """HN flag ``W_1 < W_2 < ... < V`` with strictly decreasing slopes."""
    if not fi.iso.is_split and fi.iso.scalar is not None:
        c = vp(fi.iso.scalar, fi.p)
        return [HNStep(w - c, s) for w, s in reversed(fi.hodge.breakpoints)]
    return _hn_chain(fi, _hn_slope)


def hn_filtration(fi: FilteredIsocrystal) -> Filtration:
    return _chain_filtration(fi.dim, hn_chain(fi))


def hn_pieces(fi: FilteredIsocrystal, chain: list[HNStep] | None = None) -> list[tuple[Fraction, FilteredIsocrystal]]:
    """Graded pieces ``W_i / W_{i-1}`` of a flag as filtered isocrystals."""
    chain = chain if chain is not None else hn_chain(fi)
    out = []
    lower = Subspace.zero(fi.dim)
    for c in chain:
        out.append((c.slope, fi.subquotient(c.step, lower)))
        lower = c.step
    return out


def is_semistable(fi: FilteredIsocrystal) -> bool:
    """No phi-stable subspace has slope larger than the whole object."""
    t = degree_table(fi)
    mu = _hn_slope(t, t.full)
    return all(_hn_slope(t, m) <= mu for m in range(1, 1 << t.n))


@dataclass(frozen=True)
class HNIdentity:
    hodge_term: Fraction   # <F_H, F_HN>
    newton_term: Fraction  # <F_N, F_HN>
    norm_sq: Fraction      # <F_HN, F_HN>

    @property
    def holds(self) -> bool:
        return self.hodge_term - self.newton_term == self.norm_sq

    def __bool__(self):
        return self.holds


def verify_hn_identity(fi: FilteredIsocrystal) -> HNIdentity:
    """``<F_H, F_HN> - <F_N, F_HN> == <F_HN, F_HN>`` computed from three scalar products."""
    f_hn = hn_filtration(fi)
    return HNIdentity(
        scalar_product(fi.hodge, f_hn),
        scalar_product(fi.newton_fil, f_hn),
        scalar_product(f_hn, f_hn),
    )


def hn_via_flags(fi: FilteredIsocrystal) -> Filtration:
    """HN filtration from relative degrees along flags, without quotient objects.

    An independent route used by the tests: in the split model the quotient by
    ``W_S`` is the eigen-subset complement, and degrees are additive on short
    exact sequences.
    """
    t = degree_table(fi)
    n = fi.dim
    base = 0
    pairs = []
    while base != t.full:
        best = None
        for m in range(1 << n):
            if m & base != base or m == base:
                continue
            s = (t.dH[m] - t.dH[base] - t.dN[m] + t.dN[base]) / (t.dims[m] - t.dims[base])
            key = (s, t.dims[m])
            if best is None or key > best[0]:
                best = (key, m)
        (s, _), m = best
        pairs.append((s, t.subspace(m)))
        base = m
    return Filtration.from_steps(n, pairs)


__all__ = [
    "FilteredIsocrystal",
    "WaVerdict",
    "DegreeTable",
    "HNStep",
    "HNIdentity",
    "degree_table",
    "tensor_filtered",
    "is_weakly_admissible",
    "is_weakly_admissible_generic",
    "hodge_degree_on",
    "xi_from",
    "check_scalar_inequalities",
    "constructed_xis",
    "hn_chain",
    "hn_filtration",
    "hn_pieces",
    "hn_via_flags",
    "is_semistable",
    "verify_hn_identity",
    "SplitModelRequired",
]
