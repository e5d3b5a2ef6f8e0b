"""Fargues filtrations of weakly admissible filtered isocrystals.

For a weakly admissible object the degree is ``-deg F_H = -deg F_N =
deg F_N^iota`` and the Fargues filtration is the Harder-Narasimhan flag for
``deg / dim`` over weakly admissible phi-stable subspaces.  It is computed
by the same destabilize-and-quotient recursion as the HN filtration; the
convex-projection description is verified on samples, never used to compute.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .admissibility import (
    DegreeTable,
    FilteredIsocrystal,
    HNStep,
    _hn_chain,
    degree_table,
    hodge_degree_on,
    is_weakly_admissible,
    tensor_filtered,
)
from .errors import (
    CharacterizationMismatch,
    EpsilonTooLarge,
    InvariantViolation,
    NotWeaklyAdmissible,
)
from .filtration import Filtration, dist_sq, restrict, scalar_product, tensor_filtration
from .isocrystal import deg_newton_on, is_stable, newton_filtration_opposed
from .linalg import Subspace

ZERO = Fraction(0)


def _require_wa(fi: FilteredIsocrystal) -> None:
    fi.iso.require_split("Fargues filtration")
    verdict = is_weakly_admissible(fi)
    if not verdict.admissible:
        raise NotWeaklyAdmissible(f"filtered isocrystal is not weakly admissible ({verdict.reason})")


def is_wa_subobject(fi: FilteredIsocrystal, w: Subspace) -> bool:
    """``W`` is phi-stable and ``(W, phi|W, F_H|W)`` is weakly admissible."""
    fi.iso.require_split("weakly admissible subobjects")
    if not is_stable(fi.iso, w):
        return False
    if w.is_zero:
        return True
    return is_weakly_admissible(fi.sub(w)).admissible


def fargues_degree(fi: FilteredIsocrystal, w: Subspace) -> Fraction:
    """``-deg(F_H|W)``, cross-checked against ``-deg(F_N|W)`` and ``deg(F_N^iota|W)``."""
    if not is_wa_subobject(fi, w):
        raise NotWeaklyAdmissible("not a wa subobject")
    d = -hodge_degree_on(fi, w)
    dn = -deg_newton_on(fi.iso, w)
    di = restrict(fi.newton_fil_opposed, w).degree()
    if not d == dn == di:
        raise InvariantViolation(f"Fargues degree mismatch on a wa subobject: {d}, {dn}, {di}")
    return d


def _fargues_slope(t: DegreeTable, m: int) -> Fraction | None:
    # inside a weakly admissible object, a stable W is wa iff its two degrees agree
    if t.dH[m] != t.dN[m]:
        return None
    return -t.dH[m] / t.dims[m]


@dataclass(frozen=True)
class FarguesPiece:
    weight: Fraction
    step: Subspace  # F_F^{weight}
    semistable: bool


@dataclass(frozen=True)
class FarguesResult:
    filtration: Filtration
    pieces: tuple[FarguesPiece, ...]  # from the top (largest weight) down to V

    @property
    def chain(self) -> list[HNStep]:
        return [HNStep(p.weight, p.step) for p in self.pieces]


def fargues_pieces(fi: FilteredIsocrystal, chain: Iterable[HNStep]) -> list[tuple[Fraction, FilteredIsocrystal]]:
    out = []
    lower = Subspace.zero(fi.dim)
    for c in chain:
        out.append((c.slope, fi.subquotient(c.step, lower)))
        lower = c.step
    return out


def is_fargues_semistable(fi: FilteredIsocrystal) -> bool:
    """No weakly admissible subobject has a larger Fargues slope than the whole."""
    t = degree_table(fi)
    mu = _fargues_slope(t, t.full)
    if mu is None:
        raise NotWeaklyAdmissible("not weakly admissible")
    return all(s is None or s <= mu for s in (_fargues_slope(t, m) for m in range(1, 1 << t.n)))


def fargues_filtration(fi: FilteredIsocrystal) -> FarguesResult:
    _require_wa(fi)
    chain = _hn_chain(fi, _fargues_slope)
    filt = Filtration.from_steps(fi.dim, [(c.slope, c.step) for c in chain])
    pieces = []
    for c, (_, piece) in zip(chain, fargues_pieces(fi, chain)):
        pieces.append(FarguesPiece(c.slope, c.step, is_fargues_semistable(piece)))
    return FarguesResult(filt, tuple(pieces))


# ---------------------------------------------------------------------------
# verification of the convex-projection description


def in_wa_set_stepwise(fi: FilteredIsocrystal, xi: Filtration, cache: dict | None = None) -> bool:
    if cache is None:
        cache = {}
    for s in xi.steps:
        if s not in cache:
            cache[s] = is_wa_subobject(fi, s)
        if not cache[s]:
            return False
    return True


def in_wa_set_scalar(fi: FilteredIsocrystal, xi: Filtration) -> bool:
    return scalar_product(fi.hodge, xi) == scalar_product(fi.newton_fil, xi)


def wa_membership(fi: FilteredIsocrystal, xi: Filtration, cache: dict | None = None) -> bool:
    """Membership of a phi-stable ``xi`` in the wa filtration set, tested both ways."""
    a = in_wa_set_stepwise(fi, xi, cache)
    b = in_wa_set_scalar(fi, xi)
    if a != b:
        raise CharacterizationMismatch(
            f"stepwise wa test says {a} but the scalar equality says {b} for {xi!r}")
    return a


@dataclass(frozen=True)
class ProjectionReport:
    ok: bool
    checked: int
    skipped: int
    target: Fraction  # dist_sq(F_N^iota, F_F)
    worst: Fraction | None = None  # smallest sampled dist_sq among members


def check_projection_optimality(fi: FilteredIsocrystal, samples: Iterable[Filtration],
                                result: FarguesResult | None = None) -> ProjectionReport:
    """``dist_sq(F_N^iota, F_F) <= dist_sq(F_N^iota, xi)`` for every sampled member ``xi``.

    Samples outside the wa set are counted as skipped; a disagreement between
    the two membership tests raises :class:`CharacterizationMismatch`.
    """
    result = result or fargues_filtration(fi)
    f_opp = newton_filtration_opposed(fi.iso)
    target = dist_sq(f_opp, result.filtration)
    checked = skipped = 0
    ok = True
    worst = None
    cache: dict = {}
    for xi in samples:
        if not wa_membership(fi, xi, cache):
            skipped += 1
            continue
        checked += 1
        d = dist_sq(f_opp, xi)
        if worst is None or d < worst:
            worst = d
        if d < target:
            ok = False
    return ProjectionReport(ok, checked, skipped, target, worst)


def weight_gap(result: FarguesResult) -> Fraction | None:
    ws = sorted(p.weight for p in result.pieces)
    if len(ws) < 2:
        return None
    return min(b - a for a, b in zip(ws, ws[1:]))


@dataclass(frozen=True)
class PerturbationReport:
    ok: bool
    checked: int
    slope_equalities: bool


def check_perturbation_inequality(fi: FilteredIsocrystal, result: FarguesResult, eps) -> PerturbationReport:
    """Check ``e^2 dim W + 2 e (d_i dim W - deg(F_N^iota|W)) >= 0`` on every graded piece.

    ``W`` runs over the nonzero wa subobjects of each graded piece; for the
    whole piece the linear term must vanish (``d_i`` equals the piece's slope),
    so the inequality also holds for ``-eps``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    gap = weight_gap(result)
    if gap is not None and eps > gap / 2:
        raise EpsilonTooLarge("epsilon exceeds weight gap")
    ok = True
    equalities = True
    checked = 0
    for weight, piece in fargues_pieces(fi, result.chain):
        t = degree_table(piece)
        opp = newton_filtration_opposed(piece.iso)
        for m in range(1, 1 << t.n):
            if t.dH[m] != t.dN[m]:
                continue
            w = t.subspace(m)
            dim_w = t.dims[m]
            d_opp = restrict(opp, w).degree()
            linear = weight * dim_w - d_opp
            checked += 1
            if eps * eps * dim_w + 2 * eps * linear < 0:
                ok = False
            if m == t.full:
                if linear != 0:
                    equalities = False
                if eps * eps * dim_w - 2 * eps * linear < 0:
                    ok = False
    return PerturbationReport(ok and equalities, checked, equalities)


# ---------------------------------------------------------------------------
# tensor compatibility


@dataclass(frozen=True)
class TensorCheck:
    skipped: bool
    equal: bool
    semistable_ok: bool | None = None  # only for semistable inputs
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.skipped or (self.equal and self.semistable_ok is not False)


def fargues_tensor_check(fi1: FilteredIsocrystal, fi2: FilteredIsocrystal) -> TensorCheck:
    """``F_F(fi1 (x) fi2) == F_F(fi1) (x) F_F(fi2)``; a non-split tensor is a skip."""
    t = tensor_filtered(fi1, fi2)
    if not t.iso.is_split:
        return TensorCheck(True, False, None, t.iso.split_note or "non-split tensor")
    r1, r2 = fargues_filtration(fi1), fargues_filtration(fi2)
    rt = fargues_filtration(t)
    equal = rt.filtration == tensor_filtration(r1.filtration, r2.filtration)
    sem = None
    if len(r1.pieces) == 1 and len(r2.pieces) == 1:
        mu = r1.pieces[0].weight + r2.pieces[0].weight
        sem = is_fargues_semistable(t) and len(rt.pieces) == 1 and rt.pieces[0].weight == mu
    return TensorCheck(False, equal, sem)
