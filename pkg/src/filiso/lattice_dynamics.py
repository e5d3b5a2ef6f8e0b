"""The map ``alpha(L) = phi(L) + F_H`` on lattices, for integer Hodge weights.

``L + F`` is the lattice generated by ``p^(-w) (F^w cap L)`` over the
breakpoints ``w`` of ``F``.  Fixed points of ``alpha`` are the strongly
divisible lattices.  Orbit probing only yields evidence; the exact weak
admissibility verdict lives in :mod:`filiso.admissibility`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .admissibility import FilteredIsocrystal, tensor_filtered
from .errors import DimensionError, IntegralWeightsRequired, PrimeMismatch
from .filtration import Filtration
from .linalg import Lattice, relative_position

FIXED_POINT = "FixedPoint"
BOUNDED_EVIDENCE = "BoundedEvidence"
DIVERGING = "Diverging"

DEFAULT_MAX_STEPS = 200


def _check_integral(f: Filtration) -> None:
    if any(w.denominator != 1 for w in f.weights):
        raise IntegralWeightsRequired("Γ=Z required")


def plus_op(lat: Lattice, f: Filtration) -> Lattice:
    _check_integral(f)
    if f.ambient_dim != lat.dim:
        raise DimensionError("lattice and filtration live in different spaces")
    p = Fraction(lat.p)
    gens = []
    for w, step in f.breakpoints:
        c = p ** -int(w)
        gens.extend(tuple(c * x for x in v) for v in lat.intersect_subspace(step))
    return Lattice.generated_by(gens, lat.p, lat.dim)


def alpha(fi: FilteredIsocrystal, lat: Lattice) -> Lattice:
    if fi.p != lat.p:
        raise PrimeMismatch(f"prime mismatch: {fi.p} vs {lat.p}")
    return plus_op(lat.apply(fi.iso.phi), fi.hodge)


def is_strongly_divisible(fi: FilteredIsocrystal, lat: Lattice) -> bool:
    return alpha(fi, lat) == lat


def default_radius_bound(fi: FilteredIsocrystal) -> int:
    top = max((abs(w) for w in fi.hodge.weights), default=0)
    return int(20 * (1 + top) * fi.dim)


@dataclass(frozen=True)
class OrbitReport:
    status: str
    trace: tuple[int, ...]  # r_n for n = 0, 1, ...
    lattice: Lattice | None = None  # the fixed lattice
    max_radius: int | None = None
    steps: int | None = None
    first_exit_step: int | None = None
    radius_bound: int | None = None
    cycle_length: int | None = field(default=None, compare=False)

    @property
    def is_fixed(self) -> bool:
        return self.status == FIXED_POINT


def _radius(l0: Lattice, l: Lattice) -> int:
    return sum(abs(e) for e in relative_position(l0, l))


def orbit_probe(fi: FilteredIsocrystal, l0: Lattice, max_steps: int = DEFAULT_MAX_STEPS,
                radius_bound: int | None = None) -> OrbitReport:
    """Iterate ``alpha`` from ``l0``.

    FixedPoint when an iterate equals its image; Diverging once the radius
    ``sum |relative_position(l0, alpha^n l0)|`` passes ``radius_bound``;
    BoundedEvidence when the step budget runs out or the orbit closes into
    a longer cycle (a periodic orbit is bounded).
    """
    bound = default_radius_bound(fi) if radius_bound is None else radius_bound
    trace = [0]
    seen = {l0.canonical_key(): 0}
    cur = l0
    for n in range(1, max_steps + 1):
        nxt = alpha(fi, cur)
        key = nxt.canonical_key()
        if key in seen:
            first = seen[key]
            if first == n - 1:
                return OrbitReport(FIXED_POINT, tuple(trace), lattice=cur, steps=n - 1)
            return OrbitReport(BOUNDED_EVIDENCE, tuple(trace), max_radius=max(trace), steps=n,
                               cycle_length=n - first)
        r = _radius(l0, nxt)
        trace.append(r)
        if r > bound:
            return OrbitReport(DIVERGING, tuple(trace), first_exit_step=n, radius_bound=bound)
        seen[key] = n
        cur = nxt
    return OrbitReport(BOUNDED_EVIDENCE, tuple(trace), max_radius=max(trace), steps=max_steps)


def sd_tensor_check(fi1: FilteredIsocrystal, l1: Lattice, fi2: FilteredIsocrystal, l2: Lattice) -> bool:
    """The tensor product of strongly divisible lattices is strongly divisible."""
    if not (is_strongly_divisible(fi1, l1) and is_strongly_divisible(fi2, l2)):
        raise ValueError("both lattices must be strongly divisible")
    return is_strongly_divisible(tensor_filtered(fi1, fi2), l1.kron(l2))
