"""Hodge points of lattices, the Mazur dominance check and a search for admissible flags."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .admissibility import FilteredIsocrystal, is_weakly_admissible
from .errors import DimensionError, PrimeMismatch, SplitModelRequired
from .filtration import Filtration, TypeVector, dominance_leq, type_of
from .isocrystal import Isocrystal, polygon_slopes
from .linalg import Lattice, Matrix, int_rank, relative_position

FLAG_ENTRY_RANGE = 9
MAZUR_OBSTRUCTION = "Mazur obstruction"
EXHAUSTED = "search exhausted"


def mu_sharp(mu: TypeVector) -> TypeVector:
    # Frobenius acts trivially on types over F_p, so the orbit average is mu itself
    return mu


def hodge_point(iso: Isocrystal, lat: Lattice) -> TypeVector:
    """Relative position of ``phi L`` with respect to ``L``."""
    if iso.p != lat.p:
        raise PrimeMismatch(f"prime mismatch: {iso.p} vs {lat.p}")
    return TypeVector.of(relative_position(lat, lat.apply(iso.phi)))


@dataclass(frozen=True)
class MazurReport:
    mu: TypeVector
    nu: TypeVector
    holds: bool
    sums_equal: bool

    def __bool__(self):
        return self.holds and self.sums_equal


def mazur_report(iso: Isocrystal, lat: Lattice) -> MazurReport:
    mu = hodge_point(iso, lat)
    nu = polygon_slopes(iso)
    return MazurReport(mu, nu, dominance_leq(nu, mu_sharp(mu)), mu.total == nu.total)


def mazur_check(iso: Isocrystal, lat: Lattice) -> bool:
    return mazur_report(iso, lat).holds


@dataclass(frozen=True)
class AdmSearchResult:
    filtration: Filtration | None
    reason: str = ""
    trials: int = 0
    rejected: int = 0

    @property
    def found(self) -> bool:
        return self.filtration is not None


def _eigen_coordinates(iso: Isocrystal, rows: list[list[int]]) -> list[list[Fraction]]:
    if iso.split is None:
        return [list(map(Fraction, r)) for r in rows]
    # row v = c E, so c = v E^-1
    einv = iso.split.eigbasis.inverse()
    return [list(einv.T.apply(r)) for r in rows]


def _generic(coords: list[list[Fraction]], steps: list[int]) -> bool:
    """Every prescribed step is transverse to every eigen-coordinate subspace."""
    n = len(coords)
    for k in steps:
        head = coords[:k]
        for cols in combinations(range(n), k):
            sub = [[r[c] for c in cols] for r in head]
            if Matrix(tuple(map(tuple, sub)), k).det() == 0:
                return False
    return True


def adm_search(iso: Isocrystal, mu, trials: int = 200, seed: int = 0) -> AdmSearchResult:
    """Draw random flags of type ``mu`` until one is weakly admissible.

    Sound but not complete: every returned flag is verified exactly, while a
    miss proves nothing beyond the failed trials.
    """
    mu = mu if isinstance(mu, TypeVector) else TypeVector.of(mu)
    n = iso.dim
    if len(mu) != n:
        raise DimensionError(f"type has length {len(mu)}, expected {n}")
    if not iso.has_stable_model:
        raise SplitModelRequired("admissible flag search requires split model")
    if not dominance_leq(polygon_slopes(iso), mu_sharp(mu)):
        return AdmSearchResult(None, MAZUR_OBSTRUCTION)
    ws = list(mu)
    steps = sorted({sum(1 for x in ws if x >= w) for w in ws} - {n})
    rng = random.Random(seed)
    rejected = 0
    for t in range(1, trials + 1):
        rows = [[rng.randint(-FLAG_ENTRY_RANGE, FLAG_ENTRY_RANGE) for _ in range(n)] for _ in range(n)]
        if int_rank(rows) < n or not _generic(_eigen_coordinates(iso, rows), steps):
            rejected += 1
            continue
        f = Filtration.from_flag(ws, rows)
        if type_of(f) != mu:
            raise AssertionError("random flag has the wrong type")
        if is_weakly_admissible(FilteredIsocrystal(iso, f)).admissible:
            return AdmSearchResult(f, "found", t, rejected)
    return AdmSearchResult(None, EXHAUSTED, trials, rejected)
