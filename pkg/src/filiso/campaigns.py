"""Seeded property campaigns.

Each campaign draws ``trials`` independent instances (trial ``i`` uses
``derive_seed(seed, i)``), checks one family of exact identities or
theorems, and returns a :class:`CampaignResult`.  Violations carry the
offending instance as JSON so they can be replayed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .admissibility import (
    FilteredIsocrystal,
    check_scalar_inequalities,
    constructed_xis,
    degree_table,
    hn_chain,
    hn_pieces,
    hn_via_flags,
    is_semistable,
    is_weakly_admissible,
    tensor_filtered,
    verify_hn_identity,
)
from .errors import FilisoError, InvariantViolation
from .fargues import (
    check_perturbation_inequality,
    check_projection_optimality,
    fargues_pieces,
    fargues_filtration,
    fargues_tensor_check,
    weight_gap,
)
from .filtration import (
    Filtration,
    Graduation,
    TypeVector,
    fil_of_grad,
    scalar_product,
    scalar_product_via_graded,
    tensor_filtration,
    type_of,
)
from .generate import (
    curated_fixtures,
    derive_seed,
    fixture_identity_counterexample,
    random_filtered,
    random_filtration,
    random_invertible_isocrystal,
    random_lattice,
    random_split_isocrystal,
    random_stable_xi,
    random_weights,
)
from .isocrystal import polygon_slopes
from .lattice_dynamics import DIVERGING, FIXED_POINT, is_strongly_divisible, orbit_probe, sd_tensor_check
from .linalg import Lattice
from .mazur import adm_search, mazur_report
from .scalars import vp
from .serialize import filtration_to_json, instance_to_json


@dataclass
class CampaignResult:
    name: str
    seed: int
    trials: int
    violations: list[dict] = field(default_factory=list)
    skipped: int = 0
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "campaign": self.name,
            "seed": self.seed,
            "trials": self.trials,
            "skipped": self.skipped,
            "violations": len(self.violations),
            "violation_instances": self.violations,
            "stats": dict(sorted(self.stats.items())),
        }


def _bump(stats: dict, key: str, by: int = 1) -> None:
    stats[key] = stats.get(key, 0) + by


def _rng(seed: int, i: int) -> random.Random:
    return random.Random(derive_seed(seed, i))


def _violation(i: int, seed: int, detail: str, **payload) -> dict:
    return {"trial": i, "trial_seed": derive_seed(seed, i), "detail": detail, **payload}


# scalar products --------------------------------------------------------------


def scalar_product_campaign(trials: int = 500, seed: int = 0, max_dim: int = 5) -> CampaignResult:
    """Double-sum scalar product versus both graded expressions."""
    res = CampaignResult("scalar-product", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        n = rng.randint(1, max_dim)
        f1, f2 = random_filtration(rng, n), random_filtration(rng, n)
        a = scalar_product(f1, f2)
        b = scalar_product_via_graded(f1, f2)
        c = scalar_product_via_graded(f2, f1)
        if not a == b == c:
            res.violations.append(_violation(i, seed, f"{a} / {b} / {c}", f1=filtration_to_json(f1),
                                             f2=filtration_to_json(f2)))
    return res


def tensor_scalar_campaign(trials: int = 500, seed: int = 0, max_dim: int = 3) -> CampaignResult:
    """``<F1 x G1, F2 x G2> = m <F1,F2> + n <G1,G2> + deg F1 deg G2 + deg F2 deg G1``."""
    res = CampaignResult("tensor-scalar", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        n, m = rng.randint(1, max_dim), rng.randint(1, max_dim)
        f1, f2 = random_filtration(rng, n), random_filtration(rng, n)
        g1, g2 = random_filtration(rng, m), random_filtration(rng, m)
        lhs = scalar_product(tensor_filtration(f1, g1), tensor_filtration(f2, g2))
        rhs = (m * scalar_product(f1, f2) + n * scalar_product(g1, g2)
               + f1.degree() * g2.degree() + f2.degree() * g1.degree())
        if lhs != rhs:
            res.violations.append(_violation(i, seed, f"{lhs} != {rhs}",
                                             filtrations=[filtration_to_json(x) for x in (f1, f2, g1, g2)]))
    return res


# Newton slopes ----------------------------------------------------------------


def newton_campaign(trials: int = 500, seed: int = 0, max_dim: int = 6) -> CampaignResult:
    """Polygon slopes against eigenvalue valuations, and the total against ``vp(det)``."""
    res = CampaignResult("newton", seed, 2 * trials)
    for i in range(trials):
        rng = _rng(seed, i)
        iso = random_split_isocrystal(rng, rng.randint(1, max_dim))
        got = polygon_slopes(iso)
        want = TypeVector.of(iso.split.valuations(iso.p))
        if got != want:
            res.violations.append(_violation(i, seed, f"slopes {got} != valuations {want}",
                                             instance=instance_to_json(iso)))
    for i in range(trials, 2 * trials):
        rng = _rng(seed, i)
        iso = random_invertible_isocrystal(rng, rng.randint(1, max_dim))
        nu = polygon_slopes(iso)
        if nu.total != vp(iso.phi.det(), iso.p):
            res.violations.append(_violation(i, seed, f"sum {nu.total} != vp det", instance=instance_to_json(iso)))
    return res


# the filtered isocrystal corpus -------------------------------------------------


def corpus_instance(seed: int, i: int, dims=(2, 6)) -> FilteredIsocrystal:
    rng = _rng(seed, i)
    return random_filtered(rng, rng.randint(*dims))


def random_eigenline_xi(rng: random.Random, fi: FilteredIsocrystal) -> Filtration:
    """A phi-stable filtration from small rational weights on the eigenlines."""
    den = rng.choice((1, 2, 3))
    ws = [Fraction(rng.randint(-3 * den, 3 * den), den) for _ in range(fi.dim)]
    return fil_of_grad(Graduation.from_lines(fi.iso.split.eigbasis.rows, ws))


def lemma23_campaign(trials: int = 1000, seed: int = 0, samples: int = 8, dims=(2, 6)) -> CampaignResult:
    """Enumeration verdict against the two scalar-product conditions."""
    res = CampaignResult("weak-admissibility-equivalence", seed, trials)
    for i in range(trials):
        fi = corpus_instance(seed, i, dims)
        rng = _rng(seed + 1, i)
        verdict = is_weakly_admissible(fi).admissible
        _bump(res.stats, "admissible" if verdict else "not_admissible")
        f_opp = fi.newton_fil_opposed
        xis = [x for *_, x in constructed_xis(fi)]
        xis += [random_eigenline_xi(rng, fi) for _ in range(samples)]
        table = degree_table(fi)
        xis += [random_stable_xi(rng, fi, table=table) for _ in range(samples // 2)]
        cond2 = cond3 = True
        cancel = True
        for xi in xis:
            lhs, rhs = check_scalar_inequalities(fi, xi, require_stable=False)
            opp = scalar_product(f_opp, xi)
            if rhs + opp != 0:
                cancel = False
            cond2 &= lhs <= rhs
            cond3 &= lhs + opp <= 0
        res.stats["xi_checked"] = res.stats.get("xi_checked", 0) + len(xis)
        if not (verdict == cond2 == cond3 and cancel):
            res.violations.append(_violation(i, seed, f"verdict {verdict}, (2) {cond2}, (3) {cond3}, "
                                                      f"cancellation {cancel}", instance=instance_to_json(fi)))
    return res


def hn_campaign(trials: int = 1000, seed: int = 0, dims=(2, 6)) -> CampaignResult:
    """HN triviality, the HN identity and the structure of the graded pieces."""
    res = CampaignResult("harder-narasimhan", seed, trials)
    for i in range(trials):
        fi = corpus_instance(seed, i, dims)
        problems = []
        try:
            chain = hn_chain(fi)
        except InvariantViolation as e:
            res.violations.append(_violation(i, seed, str(e), instance=instance_to_json(fi)))
            continue
        f_hn = Filtration.from_steps(fi.dim, [(c.slope, c.step) for c in chain])
        wa = is_weakly_admissible(fi).admissible
        _bump(res.stats, "admissible" if wa else "not_admissible")
        if f_hn.is_trivial != wa:
            problems.append("HN triviality disagrees with the verdict")
        if hn_via_flags(fi) != f_hn:
            problems.append("flag route disagrees")
        ident = verify_hn_identity(fi)
        if not ident.holds:
            problems.append(f"identity {ident.hodge_term} - {ident.newton_term} != {ident.norm_sq}")
        slopes = [c.slope for c in chain]
        if any(a <= b for a, b in zip(slopes, slopes[1:])):
            problems.append("slopes not strictly decreasing")
        for s, piece in hn_pieces(fi, chain):
            if piece.slope() != s or not is_semistable(piece):
                problems.append(f"piece of slope {s} is not semistable of that slope")
        _bump(res.stats, f"pieces_{len(chain)}")
        if problems:
            res.violations.append(_violation(i, seed, "; ".join(problems), instance=instance_to_json(fi)))
    return res


# admissible pairs ---------------------------------------------------------------


def random_admissible(rng: random.Random, dims=(1, 3), p: int | None = None, tries: int = 200
                      ) -> FilteredIsocrystal:
    for _ in range(tries):
        fi = random_filtered(rng, rng.randint(*dims), p)
        if is_weakly_admissible(fi).admissible:
            return fi
    raise RuntimeError("no admissible instance drawn")


def _admissible_split_pair(rng: random.Random, dims=(1, 3)):
    """Draw admissible pairs until the tensor keeps its split data; returns (fi1, fi2, tensor, collisions)."""
    collisions = 0
    while True:
        a = random_admissible(rng, dims)
        b = random_admissible(rng, dims, a.p)
        t = tensor_filtered(a, b)
        if t.iso.is_split:
            return a, b, t, collisions
        collisions += 1


def totaro_campaign(trials: int = 500, seed: int = 0, dims=(1, 3)) -> CampaignResult:
    """Tensor products of admissible objects are admissible."""
    res = CampaignResult("totaro", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        a, b, t, coll = _admissible_split_pair(rng, dims)
        res.skipped += coll
        if not is_weakly_admissible(t).admissible:
            res.violations.append(_violation(i, seed, "tensor not admissible",
                                             instances=[instance_to_json(a), instance_to_json(b)]))
    return res


def fargues_campaign(trials: int = 200, seed: int = 0, samples: int = 100, dims=(2, 5)) -> CampaignResult:
    """Membership characterization, projection optimality, perturbation and piece structure."""
    res = CampaignResult("fargues", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        fi = random_admissible(rng, dims)
        problems = []
        r = fargues_filtration(fi)
        ws = [p.weight for p in r.pieces]
        if any(a <= b for a, b in zip(ws, ws[1:])):
            problems.append("weights not strictly decreasing")
        for (w, piece), pc in zip(fargues_pieces(fi, r.chain), r.pieces):
            if not pc.semistable or -piece.hodge.degree() / piece.dim != w:
                problems.append(f"piece of weight {w} not semistable of that slope")
        if not r.filtration.steps or any(not s.is_zero and not is_weakly_admissible(fi.sub(s)).admissible
                                          for s in r.filtration.steps):
            problems.append("a step is not weakly admissible")
        if not hn_chain(fi)[0].step.is_full:
            problems.append("HN filtration of an admissible object is not trivial")
        _bump(res.stats, f"pieces_{len(r.pieces)}")
        xis = [r.filtration, Filtration.trivial(fi.dim)]
        table = degree_table(fi)
        xis += [random_stable_xi(rng, fi, k % 2 == 0, table) for k in range(samples - 2)]
        try:
            rep = check_projection_optimality(fi, xis, r)
        except FilisoError as e:
            problems.append(str(e))
            rep = None
        except AssertionError as e:
            problems.append(f"membership tests disagree: {e}")
            rep = None
        if rep is not None:
            _bump(res.stats, "members_checked", rep.checked)
            _bump(res.stats, "non_members", rep.skipped)
            if not rep.ok:
                problems.append(f"projection optimality fails: {rep.target} > {rep.worst}")
        gap = weight_gap(r)
        eps = gap / 4 if gap is not None else Fraction(1, 4)
        pert = check_perturbation_inequality(fi, r, eps)
        if not pert.ok:
            problems.append("perturbation inequality fails")
        if problems:
            res.violations.append(_violation(i, seed, "; ".join(problems), instance=instance_to_json(fi)))
    return res


def fargues_tensor_campaign(trials: int = 300, seed: int = 0, dims=(1, 3)) -> CampaignResult:
    res = CampaignResult("fargues-tensor", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        a, b, _, coll = _admissible_split_pair(rng, dims)
        res.skipped += coll
        chk = fargues_tensor_check(a, b)
        if chk.semistable_ok is not None:
            _bump(res.stats, "semistable_pairs")
        if not chk.ok:
            res.violations.append(_violation(i, seed, f"equal {chk.equal}, semistable {chk.semistable_ok}",
                                             instances=[instance_to_json(a), instance_to_json(b)]))
    return res


# lattices -------------------------------------------------------------------------


def mazur_campaign(trials: int = 1000, seed: int = 0, max_dim: int = 5) -> CampaignResult:
    res = CampaignResult("mazur", seed, trials)
    for i in range(trials):
        rng = _rng(seed, i)
        iso = random_split_isocrystal(rng, rng.randint(1, max_dim), vals=(-2, 3))
        lat = random_lattice(rng, iso.dim, iso.p)
        rep = mazur_report(iso, lat)
        if rep.mu != TypeVector.of(rep.mu):
            raise AssertionError("unsorted type")
        if not rep:
            res.violations.append(_violation(i, seed, f"nu {list(map(str, rep.nu))} vs mu {list(map(str, rep.mu))}",
                                             instance=instance_to_json(iso, lattice=lat)))
    return res


@dataclass
class LaffailleRow:
    name: str
    admissible: bool
    statuses: list[str]
    fixed: list[Lattice]


def laffaille_campaign(seed: int = 0, starts: int = 3) -> CampaignResult:
    """Orbit probes on the curated fixtures, checked against the exact verdicts."""
    fixtures = curated_fixtures()
    res = CampaignResult("laffaille", seed, len(fixtures))
    rows = []
    for i, fx in enumerate(fixtures):
        rng = _rng(seed, i)
        fi = fx.fi
        wa = is_weakly_admissible(fi).admissible
        problems = []
        if wa != fx.admissible:
            problems.append("enumeration verdict differs from the recorded status")
        lats = [Lattice.standard(fi.dim, fi.p)] + [random_lattice(rng, fi.dim, fi.p) for _ in range(starts - 1)]
        statuses, fixed = [], []
        for lat in lats:
            rep = orbit_probe(fi, lat)
            statuses.append(rep.status)
            if rep.status == FIXED_POINT:
                if not is_strongly_divisible(fi, rep.lattice):
                    problems.append("reported fixed lattice is not fixed")
                if not wa:
                    problems.append("fixed lattice for a non-admissible instance")
                fixed.append(rep.lattice)
            elif rep.status == DIVERGING and wa:
                problems.append("admissible instance diverges")
            elif rep.status != DIVERGING and not wa:
                problems.append("non-admissible instance did not diverge within budget")
        for s in statuses:
            _bump(res.stats, s)
        rows.append(LaffailleRow(fx.name, wa, statuses, fixed))
        if problems:
            res.violations.append(_violation(i, seed, f"{fx.name}: " + "; ".join(problems),
                                             instance=instance_to_json(fi, name=fx.name)))
    # strongly divisible tensor pairs
    sd = [(r, fx) for r, fx in zip(rows, fixtures) if r.fixed]
    pairs = 0
    for a in range(len(sd)):
        for b in range(a, len(sd)):
            (ra, fa), (rb, fb) = sd[a], sd[b]
            if fa.fi.p != fb.fi.p or fa.fi.dim * fb.fi.dim > 9:
                continue
            pairs += 1
            if not sd_tensor_check(fa.fi, ra.fixed[0], fb.fi, rb.fixed[0]):
                res.violations.append(_violation(a, seed, f"tensor of {fa.name} and {fb.name} not strongly divisible"))
    res.stats["sd_tensor_pairs"] = pairs
    return res


# admissible flag search -------------------------------------------------------------


def adm_search_campaign(trials: int = 100, seed: int = 0, search_trials: int = 60, max_dim: int = 4
                        ) -> CampaignResult:
    """Every flag returned by the search is verified; the identity counterexample finds nothing."""
    res = CampaignResult("adm-search", seed, trials + 1)
    for i in range(trials):
        rng = _rng(seed, i)
        iso = random_split_isocrystal(rng, rng.randint(1, max_dim))
        mu = TypeVector.of(random_weights(rng, iso.dim, -2, 3))
        # move the total onto the Newton total so the obstruction is not automatic
        diff = polygon_slopes(iso).total - mu.total
        mu = TypeVector.of(list(mu.entries[:-1]) + [mu.entries[-1] + diff]) if rng.random() < 0.8 else mu
        r = adm_search(iso, mu, search_trials, derive_seed(seed, i))
        _bump(res.stats, "found" if r.found else r.reason.replace(" ", "_"))
        if r.found:
            ok = type_of(r.filtration) == mu and is_weakly_admissible(FilteredIsocrystal(iso, r.filtration)).admissible
            if not ok:
                res.violations.append(_violation(i, seed, "returned flag fails verification",
                                                 instance=instance_to_json(FilteredIsocrystal(iso, r.filtration))))
    cx = fixture_identity_counterexample()
    r = adm_search(cx.iso, TypeVector.of([1, -1]), 500, seed)
    res.stats["counterexample_reason"] = r.reason
    if r.found:
        res.violations.append(_violation(trials, seed, "search succeeded on the identity counterexample",
                                         instance=instance_to_json(FilteredIsocrystal(cx.iso, r.filtration))))
    return res


CAMPAIGNS: dict[str, Callable[..., CampaignResult]] = {
    "scalar-product": scalar_product_campaign,
    "tensor-scalar": tensor_scalar_campaign,
    "newton": newton_campaign,
    "weak-admissibility": lemma23_campaign,
    "harder-narasimhan": hn_campaign,
    "totaro": totaro_campaign,
    "fargues": fargues_campaign,
    "fargues-tensor": fargues_tensor_campaign,
    "mazur": mazur_campaign,
    "adm-search": adm_search_campaign,
}
