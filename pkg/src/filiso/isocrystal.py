"""Isocrystals over F_p: a rational Frobenius matrix together with its slopes.

Since the residue field is F_p the Frobenius twist is trivial and the
Frobenius is an honest linear map ``phi``.  Two computable models are
supported for everything that quantifies over phi-stable subspaces:

* the *split* model: ``phi`` is diagonalizable over Q with pairwise distinct
  eigenvalues, given explicitly.  The phi-stable subspaces are then exactly
  the ``2^n`` spans of subsets of eigenvectors.
* the *scalar* model: ``phi = c * Id``; every subspace is stable.

Slopes (the Newton vector) are available for any invertible ``phi`` via the
Newton polygon of the characteristic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .errors import (
    DimensionError,
    EigenEquationError,
    EnumerationBoundExceeded,
    PrimeMismatch,
    RepeatedEigenvalueError,
    SingularFrobeniusError,
    SplitModelRequired,
)
from .filtration import Filtration, Graduation, TypeVector, fil_of_grad, iota
from .linalg import Matrix, Subspace, quotient_operator, restrict_operator
from .scalars import Q, check_prime, newton_polygon, vp

DEFAULT_ENUMERATION_BOUND = 12


@dataclass(frozen=True)
class SplitData:
    eigvals: tuple[Fraction, ...]
    eigbasis: Matrix  # rows are eigenvectors

    def valuations(self, p: int) -> tuple[int, ...]:
        return tuple(vp(x, p) for x in self.eigvals)


@dataclass(frozen=True)
class Isocrystal:
    p: int
    phi: Matrix
    split: SplitData | None = None
    # set when a construction (e.g. a tensor product) could not keep split data
    split_note: str | None = None

    @property
    def dim(self) -> int:
        return self.phi.nrows

    @property
    def is_split(self) -> bool:
        return self.split is not None

    @property
    def scalar(self) -> Fraction | None:
        """``c`` if ``phi = c * Id``, else None."""
        rows = self.phi.rows
        c = rows[0][0] if rows else None
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if x != (c if i == j else 0):
                    return None
        return c

    @property
    def has_stable_model(self) -> bool:
        return self.is_split or self.scalar is not None

    @cached_property
    def _slope_graduation(self) -> Graduation:
        n = self.dim
        if self.split is not None:
            return Graduation.from_lines(self.split.eigbasis.rows, self.split.valuations(self.p))
        c = self.scalar
        if c is not None:
            return Graduation(n, ((Fraction(vp(c, self.p)), Subspace.full(n)),))
        raise SplitModelRequired("slope decomposition requires split model")

    @cached_property
    def _newton_fils(self) -> tuple[Filtration, Filtration]:
        g = self._slope_graduation
        return fil_of_grad(g), fil_of_grad(iota(g))

    def require_split(self, what: str = "operation") -> SplitData:
        if self.split is None:
            note = f" ({self.split_note})" if self.split_note else ""
            raise SplitModelRequired(f"{what} requires split model{note}")
        return self.split

    # sub- and quotient objects ----------------------------------------------

    def sub(self, w: Subspace) -> "Isocrystal":
        """The sub-isocrystal on a phi-stable ``w``, in ``w``'s coordinates."""
        phi_w = restrict_operator(self.phi, w)
        split = None
        if self.split is not None:
            pairs = [(lam, w.coords(v)) for lam, v in zip(self.split.eigvals, self.split.eigbasis.rows)
                     if w.contains_vector(v)]
            if len(pairs) != w.dim:
                raise DimensionError("stable subspace is not spanned by eigenvectors")
            split = SplitData(tuple(l for l, _ in pairs), Matrix(tuple(v for _, v in pairs), w.dim))
        return Isocrystal(self.p, phi_w, split, self.split_note)

    def quotient(self, w: Subspace) -> "Isocrystal":
        """The quotient isocrystal ``V / w`` on the complement-coordinate model."""
        phi_q = quotient_operator(self.phi, w)
        split = None
        if self.split is not None:
            pairs = [(lam, w.project(v)) for lam, v in zip(self.split.eigvals, self.split.eigbasis.rows)
                     if not w.contains_vector(v)]
            split = SplitData(tuple(l for l, _ in pairs), Matrix(tuple(v for _, v in pairs), phi_q.nrows))
        return Isocrystal(self.p, phi_q, split, self.split_note)


def make_isocrystal(p: int, phi, eigvals: Sequence | None = None, eigbasis=None) -> Isocrystal:
    """Validated constructor.

    ``eigbasis`` rows are eigenvectors: ``phi @ eigbasis[i] == eigvals[i] * eigbasis[i]``.
    """
    check_prime(p)
    phi = phi if isinstance(phi, Matrix) else Matrix.of(phi)
    if not phi.is_square or phi.nrows == 0:
        raise DimensionError("Frobenius must be a nonempty square matrix")
    if phi.det() == 0:
        raise SingularFrobeniusError("singular Frobenius matrix")
    if (eigvals is None) != (eigbasis is None):
        raise ValueError("eigvals and eigbasis must be given together")
    split = None
    if eigvals is not None:
        lams = tuple(Q(x) for x in eigvals)
        basis = eigbasis if isinstance(eigbasis, Matrix) else Matrix.of(eigbasis)
        n = phi.nrows
        if len(lams) != n or basis.nrows != n or basis.ncols != n:
            raise DimensionError("split data has the wrong size")
        if len(set(lams)) != n:
            raise RepeatedEigenvalueError("eigenvalues must be pairwise distinct")
        if not basis.is_invertible():
            raise EigenEquationError("eigenvectors are not a basis")
        for lam, v in zip(lams, basis.rows):
            if phi.apply(v) != tuple(lam * x for x in v):
                raise EigenEquationError(f"phi v != {lam} v for v = {[str(x) for x in v]}")
        split = SplitData(lams, basis)
    return Isocrystal(p, phi, split)


def split_from_eigen(p: int, eigvals: Sequence, eigbasis) -> Isocrystal:
    """Build ``phi`` from prescribed eigenvalues and eigenvectors (rows)."""
    e = eigbasis if isinstance(eigbasis, Matrix) else Matrix.of(eigbasis)
    # phi E^T = E^T D
    et = e.T
    phi = et @ Matrix.diag(eigvals) @ et.inverse()
    return make_isocrystal(p, phi, eigvals, e)


@dataclass(frozen=True)
class NewtonData:
    """Slopes and (when available) the two opposed Newton filtrations."""

    slopes: TypeVector
    graduation: Graduation | None = None

    @property
    def newton_fil(self) -> Filtration:
        if self.graduation is None:
            raise SplitModelRequired("slope decomposition requires split model")
        return fil_of_grad(self.graduation)

    @property
    def newton_fil_opposed(self) -> Filtration:
        if self.graduation is None:
            raise SplitModelRequired("slope decomposition requires split model")
        return fil_of_grad(iota(self.graduation))


def polygon_slopes(iso: Isocrystal) -> TypeVector:
    return TypeVector(newton_polygon(iso.phi.charpoly(), iso.p).slopes)


def slope_graduation(iso: Isocrystal) -> Graduation:
    """The slope decomposition ``V = sum_l V_l`` (split or scalar model)."""
    return iso._slope_graduation


def newton(iso: Isocrystal) -> NewtonData:
    slopes = polygon_slopes(iso)
    grad = slope_graduation(iso) if iso.has_stable_model else None
    return NewtonData(slopes, grad)


def newton_filtration(iso: Isocrystal) -> Filtration:
    return iso._newton_fils[0]


def newton_filtration_opposed(iso: Isocrystal) -> Filtration:
    return iso._newton_fils[1]


def eigen_subspace(iso: Isocrystal, mask: int) -> Subspace:
    split = iso.require_split("eigen-span")
    rows = [v for i, v in enumerate(split.eigbasis.rows) if mask >> i & 1]
    return Subspace.span(rows, iso.dim)


def invariant_subspaces(iso: Isocrystal, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[Subspace]:
    """All phi-stable subspaces of a split isocrystal, sorted canonically."""
    iso.require_split("invariant subspace enumeration")
    if iso.dim > bound:
        raise EnumerationBoundExceeded(f"enumeration bound exceeded: dim {iso.dim} > {bound}")
    subs = [eigen_subspace(iso, m) for m in range(1 << iso.dim)]
    subs.sort(key=lambda s: (s.dim, s.basis))
    return subs


def is_stable(iso: Isocrystal, w: Subspace) -> bool:
    return all(w.contains_vector(iso.phi.apply(b)) for b in w.basis)


def deg_newton_on(iso: Isocrystal, w: Subspace) -> Fraction:
    """``deg(F_N | W) = vp(det(phi | W))`` for a phi-stable ``W``."""
    if w.is_zero:
        return Fraction(0)
    return Fraction(vp(restrict_operator(iso.phi, w).det(), iso.p))


def tensor_isocrystal(a: Isocrystal, b: Isocrystal) -> Isocrystal:
    """Kronecker product; split data survives when all eigenvalue products differ."""
    if a.p != b.p:
        raise PrimeMismatch(f"prime mismatch: {a.p} vs {b.p}")
    phi = a.phi.kron(b.phi)
    if a.split is None or b.split is None:
        note = "non-split tensor: a factor is not split"
        return Isocrystal(a.p, phi, None, note)
    lams = tuple(x * y for x in a.split.eigvals for y in b.split.eigvals)
    if len(set(lams)) != len(lams):
        return Isocrystal(a.p, phi, None, "non-split tensor: eigenvalue products collide")
    basis = a.split.eigbasis.kron(b.split.eigbasis)
    return Isocrystal(a.p, phi, SplitData(lams, basis))
