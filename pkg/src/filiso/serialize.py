"""JSON encoding.  Every rational is written as an ``"a"`` or ``"a/b"`` string.

Instance format::

    {"p": 3, "phi": [["1","0"],["0","3"]],
     "eigvals": ["1","3"], "eigbasis": [["1","0"],["0","1"]],      # optional, together
     "hodge": {"dim": 2, "breakpoints": [{"weight": "1", "basis": [["1","1"]]},
                                          {"weight": "0", "basis": [["1","0"],["0","1"]]}]},
     "lattice": [["1","0"],["0","1"]],                              # optional
     "name": "..."}                                                  # optional

Filtration breakpoints are written by decreasing weight and read in any order.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .admissibility import FilteredIsocrystal, WaVerdict
from .errors import FilisoError
from .filtration import Filtration, TypeVector
from .isocrystal import Isocrystal, make_isocrystal
from .lattice_dynamics import OrbitReport
from .linalg import Lattice, Matrix, Subspace
from .scalars import Q, q_str


class SchemaError(FilisoError, ValueError):
    """Malformed JSON document; the message names the offending location."""


def _q(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{where}: expected a rational string, got {x!r}")
    try:
        return Q(x)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"{where}: bad rational {x!r}") from e


def _matrix(rows, where: str) -> list[list[Fraction]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError(f"{where}: expected a list of rows")
    return [[_q(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]


def _field(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in d:
        raise SchemaError(f"{where}: missing field {key!r}")
    return d[key]


def rows_json(rows) -> list[list[str]]:
    return [[q_str(x) for x in r] for r in rows]


def vector_json(xs) -> list[str]:
    return [q_str(x) for x in xs]


# filtrations ----------------------------------------------------------------


def filtration_to_json(f: Filtration) -> dict:
    return {
        "dim": f.ambient_dim,
        "breakpoints": [{"weight": q_str(w), "basis": rows_json(s.basis)} for w, s in reversed(f.breakpoints)],
    }


def filtration_from_json(d, where: str = "filtration") -> Filtration:
    n = _field(d, "dim", where)
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise SchemaError(f"{where}.dim: expected a nonnegative integer")
    bps = _field(d, "breakpoints", where)
    if not isinstance(bps, list):
        raise SchemaError(f"{where}.breakpoints: expected a list")
    pairs = []
    for i, bp in enumerate(bps):
        loc = f"{where}.breakpoints[{i}]"
        w = _q(_field(bp, "weight", loc), loc + ".weight")
        rows = _matrix(_field(bp, "basis", loc), loc + ".basis")
        if any(len(r) != n for r in rows):
            raise SchemaError(f"{loc}.basis: vectors must have length {n}")
        pairs.append((w, Subspace.span(rows, n)))
    try:
        return Filtration.from_steps(n, pairs)
    except ValueError as e:
        raise SchemaError(f"{where}: {e}") from e


# instances ------------------------------------------------------------------


def isocrystal_to_json(iso: Isocrystal) -> dict:
    d: dict[str, Any] = {"p": iso.p, "phi": rows_json(iso.phi.rows)}
    if iso.split is not None:
        d["eigvals"] = vector_json(iso.split.eigvals)
        d["eigbasis"] = rows_json(iso.split.eigbasis.rows)
    return d


def instance_to_json(fi: FilteredIsocrystal | Isocrystal, lattice: Lattice | None = None,
                     name: str | None = None) -> dict:
    if isinstance(fi, FilteredIsocrystal):
        d = isocrystal_to_json(fi.iso)
        d["hodge"] = filtration_to_json(fi.hodge)
    else:
        d = isocrystal_to_json(fi)
    if lattice is not None:
        d["lattice"] = rows_json(lattice.basis.rows)
    if name is not None:
        d["name"] = name
    return d


class Instance:
    """A parsed instance document."""

    def __init__(self, iso: Isocrystal, hodge: Filtration | None, lattice: Lattice | None, name: str | None):
        self.iso = iso
        self.hodge = hodge
        self.lattice = lattice
        self.name = name

    @property
    def filtered(self) -> FilteredIsocrystal:
        if self.hodge is None:
            raise SchemaError("instance: missing field 'hodge'")
        return FilteredIsocrystal(self.iso, self.hodge)


def instance_from_json(d, where: str = "instance") -> Instance:
    p = _field(d, "p", where)
    if isinstance(p, bool) or not isinstance(p, int):
        raise SchemaError(f"{where}.p: expected an integer")
    phi = _matrix(_field(d, "phi", where), where + ".phi")
    eigvals = eigbasis = None
    if "eigvals" in d or "eigbasis" in d:
        ev = _field(d, "eigvals", where)
        if not isinstance(ev, list):
            raise SchemaError(f"{where}.eigvals: expected a list")
        eigvals = [_q(x, f"{where}.eigvals[{i}]") for i, x in enumerate(ev)]
        eigbasis = _matrix(_field(d, "eigbasis", where), where + ".eigbasis")
    if phi and any(len(r) != len(phi) for r in phi):
        raise SchemaError(f"{where}.phi: expected a square matrix")
    iso = make_isocrystal(p, Matrix.of(phi) if phi else Matrix((), 0), eigvals, eigbasis)
    hodge = filtration_from_json(d["hodge"], where + ".hodge") if "hodge" in d else None
    lattice = None
    if "lattice" in d:
        lattice = Lattice(Matrix.of(_matrix(d["lattice"], where + ".lattice")), p)
    name = d.get("name")
    return Instance(iso, hodge, lattice, name)


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def report_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def instance_hash(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


# results --------------------------------------------------------------------


def type_json(t: TypeVector) -> list[str]:
    return vector_json(t.entries)


def verdict_to_json(v: WaVerdict) -> dict:
    d: dict[str, Any] = {"admissible": v.admissible}
    if not v.admissible:
        d["reason"] = v.reason
        if v.witness is not None:
            d["witness"] = rows_json(v.witness.basis)
        if v.degrees is not None:
            d["degrees"] = {"hodge": q_str(v.degrees[0]), "newton": q_str(v.degrees[1])}
    return d


def orbit_report_to_json(r: OrbitReport) -> dict:
    d: dict[str, Any] = {"status": r.status, "trace": list(r.trace)}
    if r.lattice is not None:
        d["lattice"] = rows_json(r.lattice.basis.rows)
    for key in ("max_radius", "steps", "first_exit_step", "radius_bound", "cycle_length"):
        v = getattr(r, key)
        if v is not None:
            d[key] = v
    return d
