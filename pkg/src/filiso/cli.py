"""Command-line front end.

Exit codes: 0 success or verified, 1 property violation (the offending
instance is written to ``--violations-dir``), 2 usage or model error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .admissibility import FilteredIsocrystal, hn_chain, hn_via_flags, is_weakly_admissible, verify_hn_identity
from .campaigns import (
    CampaignResult,
    fargues_tensor_campaign,
    mazur_campaign,
    totaro_campaign,
)
from .errors import FilisoError
from .fargues import fargues_filtration, in_wa_set_scalar
from .filtration import Filtration, TypeVector, scalar_product, scalar_product_via_graded
from .generate import curated_fixtures, hodge_type_for, random_filtered, random_hodge, random_lattice, random_split_isocrystal
from .isocrystal import newton
from .lattice_dynamics import DIVERGING, FIXED_POINT, orbit_probe
from .linalg import Lattice, Matrix, relative_position
from .scalars import check_prime, newton_polygon, q_str
from .serialize import (
    SchemaError,
    filtration_to_json,
    instance_from_json,
    instance_hash,
    instance_to_json,
    orbit_report_to_json,
    report_dumps,
    rows_json,
    type_json,
    verdict_to_json,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# io ---------------------------------------------------------------------------


def _load(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}") from e


def _instance(path: str):
    doc = _load(path)
    try:
        return instance_from_json(doc, where=path), doc
    except SchemaError as e:
        raise UsageError(str(e)) from e


def _meta(doc=None, seed=None, **extra) -> dict:
    m = {"version": __version__}
    if doc is not None:
        m["instance_hash"] = instance_hash(doc)
    if seed is not None:
        m["seed"] = seed
    m.update(extra)
    return m


def _emit(report: dict, out: str | None) -> None:
    text = report_dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_violations(res: CampaignResult, directory: str) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for v in res.violations:
        (d / f"{res.name}-trial{v['trial']}.json").write_text(report_dumps(v))


# commands -------------------------------------------------------------------------


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    check_prime(args.p)
    iso = random_split_isocrystal(rng, args.dim, args.p)
    if args.hodge_type:
        mu = TypeVector.of(x.strip() for x in args.hodge_type.split(","))
        if len(mu) != args.dim:
            raise UsageError(f"--hodge-type needs {args.dim} entries")
    else:
        mu = hodge_type_for(rng, TypeVector.of(iso.split.valuations(iso.p)))
    fi = FilteredIsocrystal(iso, random_hodge(rng, iso, mu, args.special))
    lat = random_lattice(rng, iso.dim, iso.p) if args.with_lattice else None
    doc = instance_to_json(fi, lattice=lat, name=f"gen-d{args.dim}-p{args.p}-s{args.seed}")
    doc["meta"] = _meta(seed=args.seed)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_newton(args) -> int:
    inst, doc = _instance(args.instance)
    nd = newton(inst.iso)
    poly = newton_polygon(inst.iso.phi.charpoly(), inst.iso.p)
    rep = {
        "slopes": type_json(nd.slopes),
        "polygon": [[i, q_str(v)] for i, v in poly.vertices],
        "newton_filtration": filtration_to_json(nd.newton_fil) if nd.graduation is not None else None,
        "meta": _meta(doc),
    }
    _emit(rep, args.out)
    return EXIT_OK


def cmd_check_wa(args) -> int:
    inst, doc = _instance(args.instance)
    rep = verdict_to_json(is_weakly_admissible(inst.filtered))
    rep["meta"] = _meta(doc)
    _emit(rep, args.out)
    return EXIT_OK


def cmd_hn(args) -> int:
    inst, doc = _instance(args.instance)
    fi = inst.filtered
    chain = hn_chain(fi)
    f_hn = Filtration.from_steps(fi.dim, [(c.slope, c.step) for c in chain])
    ident = verify_hn_identity(fi)
    rep = filtration_to_json(f_hn)
    rep["identity"] = {"hodge": q_str(ident.hodge_term), "newton": q_str(ident.newton_term),
                       "norm_sq": q_str(ident.norm_sq), "holds": ident.holds}
    rep["meta"] = _meta(doc)
    _emit(rep, args.out)
    return EXIT_OK if ident.holds else EXIT_VIOLATION


def cmd_fargues(args) -> int:
    inst, doc = _instance(args.instance)
    r = fargues_filtration(inst.filtered)
    rep = filtration_to_json(r.filtration)
    rep["pieces"] = [{"weight": q_str(p.weight), "step": rows_json(p.step.basis), "semistable": p.semistable}
                     for p in r.pieces]
    rep["meta"] = _meta(doc)
    _emit(rep, args.out)
    return EXIT_OK if all(p.semistable for p in r.pieces) else EXIT_VIOLATION


def _lattice_of(path: str) -> tuple[Lattice, object, dict]:
    doc = _load(path)
    if not isinstance(doc, dict) or "lattice" not in doc or "p" not in doc:
        raise UsageError(f"{path}: expected an object with fields 'p' and 'lattice'")
    if "phi" in doc:
        inst = instance_from_json(doc, where=path)
        return inst.lattice, inst.iso, doc
    try:
        lat = Lattice(Matrix.of(doc["lattice"]), doc["p"])
    except (TypeError, ValueError) as e:
        raise UsageError(f"{path}.lattice: {e}") from e
    return lat, None, doc


def cmd_relpos(args) -> int:
    l1, iso, doc1 = _lattice_of(args.first)
    if args.second:
        l2, _, doc2 = _lattice_of(args.second)
        meta = _meta(doc1, second_instance_hash=instance_hash(doc2))
        what = "second lattice relative to first"
    else:
        if iso is None:
            raise UsageError("with a single file, the file must contain 'phi'")
        l2 = l1.apply(iso.phi)
        meta = _meta(doc1)
        what = "phi(L) relative to L"
    rep = {"relative_position": [int(x) for x in relative_position(l1, l2)], "of": what, "meta": meta}
    _emit(rep, args.out)
    return EXIT_OK


def cmd_laffaille_probe(args) -> int:
    inst, doc = _instance(args.instance)
    fi = inst.filtered
    wa = is_weakly_admissible(fi).admissible
    rng = random.Random(args.seed)
    starts = [inst.lattice if inst.lattice is not None else Lattice.standard(fi.dim, fi.p)]
    starts += [random_lattice(rng, fi.dim, fi.p) for _ in range(args.starts - 1)]
    reports, problems = [], []
    for lat in starts:
        r = orbit_probe(fi, lat, args.max_steps, args.radius_bound)
        reports.append(orbit_report_to_json(r))
        if r.status == FIXED_POINT and not wa:
            problems.append("fixed lattice for a non-admissible instance")
        if r.status == DIVERGING and wa:
            problems.append("admissible instance diverges")
    rep = {"admissible": wa, "probes": reports, "inconsistencies": problems, "meta": _meta(doc, args.seed)}
    _emit(rep, args.out)
    if problems:
        res = CampaignResult("laffaille-probe", args.seed, len(starts))
        res.violations.append({"trial": 0, "detail": "; ".join(problems), "instance": doc})
        _write_violations(res, args.violations_dir)
        return EXIT_VIOLATION
    return EXIT_OK


def _campaign(fn, args, **kw) -> int:
    res = fn(trials=args.trials, seed=args.seed, **kw)
    rep = res.to_json()
    rep["meta"] = _meta(seed=args.seed, parameters={"trials": args.trials, **kw})
    _emit(rep, args.out)
    if res.violations:
        _write_violations(res, args.violations_dir)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_mazur_fuzz(args) -> int:
    return _campaign(mazur_campaign, args, max_dim=args.max_dim)


def cmd_totaro_fuzz(args) -> int:
    return _campaign(totaro_campaign, args)


def cmd_fargues_tensor_fuzz(args) -> int:
    return _campaign(fargues_tensor_campaign, args)


def identity_checks(fi: FilteredIsocrystal) -> dict[str, bool]:
    """Every exact identity that applies to one filtered isocrystal."""
    f_h, f_n, f_opp = fi.hodge, fi.newton_fil, fi.newton_fil_opposed
    out = {
        "scalar_product_formulas": all(
            scalar_product(a, b) == scalar_product_via_graded(a, b) == scalar_product_via_graded(b, a)
            for a, b in ((f_h, f_n), (f_h, f_opp), (f_h, f_h))),
        # only for phi-stable test filtrations
        "newton_cancellation": scalar_product(f_n, f_n) + scalar_product(f_opp, f_n) == 0,
    }
    wa = is_weakly_admissible(fi).admissible
    chain = hn_chain(fi)
    f_hn = Filtration.from_steps(fi.dim, [(c.slope, c.step) for c in chain])
    out["hn_trivial_iff_wa"] = f_hn.is_trivial == wa
    out["hn_identity"] = verify_hn_identity(fi).holds
    out["hn_cancellation"] = scalar_product(f_n, f_hn) + scalar_product(f_opp, f_hn) == 0
    if fi.iso.is_split:
        out["hn_routes_agree"] = hn_via_flags(fi) == f_hn
        if wa:
            r = fargues_filtration(fi)
            out["fargues_pieces_semistable"] = all(p.semistable for p in r.pieces)
            out["fargues_in_wa_set"] = in_wa_set_scalar(fi, r.filtration)
    return out


def cmd_identity_suite(args) -> int:
    corpus: list[tuple[str, FilteredIsocrystal, object]] = []
    if args.instances:
        for path in args.instances:
            inst, doc = _instance(path)
            corpus.append((path, inst.filtered, doc))
    else:
        for fx in curated_fixtures():
            corpus.append((fx.name, fx.fi, instance_to_json(fx.fi, name=fx.name)))
        for i in range(args.trials):
            rng = random.Random(f"{args.seed}:{i}")
            fi = random_filtered(rng, rng.randint(2, args.max_dim))
            corpus.append((f"random-{i}", fi, instance_to_json(fi)))
    counts: dict[str, dict[str, int]] = {}
    res = CampaignResult("identity-suite", args.seed, len(corpus))
    for i, (name, fi, doc) in enumerate(corpus):
        checks = identity_checks(fi)
        for k, ok in checks.items():
            c = counts.setdefault(k, {"checked": 0, "violations": 0})
            c["checked"] += 1
            c["violations"] += not ok
        bad = sorted(k for k, ok in checks.items() if not ok)
        if bad:
            res.violations.append({"trial": i, "name": name, "detail": ", ".join(bad), "instance": doc})
    rep = {"instances": len(corpus), "identities": counts, "violations": len(res.violations),
           "violation_instances": res.violations,
           "meta": _meta(seed=args.seed, parameters={"trials": args.trials, "max_dim": args.max_dim,
                                                     "files": list(args.instances)})}
    _emit(rep, args.out)
    if res.violations:
        _write_violations(res, args.violations_dir)
        return EXIT_VIOLATION
    return EXIT_OK


# parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="filiso", description="Exact computations with filtered isocrystals.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, instance=True):
        p = sub.add_parser(name, help=help_)
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.set_defaults(func=fn)
        return p

    def add_campaign(name, fn, help_, trials):
        p = add(name, fn, help_, instance=False)
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--violations-dir", default="violations")
        return p

    g = add("gen", cmd_gen, "write a random split filtered isocrystal", instance=False)
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--hodge-type", help="comma-separated Hodge weights, e.g. 1,0 or 1/2,1/2")
    g.add_argument("--special", type=float, default=0.0, help="probability of special flag vectors")
    g.add_argument("--with-lattice", action="store_true")

    add("newton", cmd_newton, "Newton slopes and polygon")
    add("check-wa", cmd_check_wa, "weak admissibility verdict")
    add("hn", cmd_hn, "Harder-Narasimhan filtration")
    add("fargues", cmd_fargues, "Fargues filtration of an admissible instance")

    r = add("relpos", cmd_relpos, "relative position of two lattices", instance=False)
    r.add_argument("first", help="lattice document, or an instance with a lattice")
    r.add_argument("second", nargs="?", help="second lattice document")

    lp = add("laffaille-probe", cmd_laffaille_probe, "probe alpha-orbits for strongly divisible lattices")
    lp.add_argument("--max-steps", type=int, default=200)
    lp.add_argument("--radius-bound", type=int, default=None)
    lp.add_argument("--starts", type=int, default=3)
    lp.add_argument("--seed", type=int, default=0)
    lp.add_argument("--violations-dir", default="violations")

    m = add_campaign("mazur-fuzz", cmd_mazur_fuzz, "Mazur inequality on random lattices", 1000)
    m.add_argument("--max-dim", type=int, default=5)
    add_campaign("totaro-fuzz", cmd_totaro_fuzz, "tensor products of admissible objects", 500)
    add_campaign("fargues-tensor-fuzz", cmd_fargues_tensor_fuzz, "Fargues filtration of tensor products", 300)
    s = add_campaign("identity-suite", cmd_identity_suite, "every exact identity on a corpus", 50)
    s.add_argument("instances", nargs="*", help="instance files (default: fixtures plus a random corpus)")
    s.add_argument("--max-dim", type=int, default=5)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
    except (FilisoError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
