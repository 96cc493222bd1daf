"""Executable checks: each suite verifies one proved statement on one group.

Suites return NOT_APPLICABLE when their hypotheses fail, so coverage stays
honest; a FAIL anywhere on the built-in corpus means an implementation bug,
and the record always carries a witness payload.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

from .analysis import GroupAnalysis
from .actions import construct_sigma_for_field
from .errors import HypothesesNotMet, UnknownSuite
from .corpus import GroupSpec, VerdictRecord, VerdictStore
from .residues import field_contains, field_signature

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT_APPLICABLE"

Outcome = tuple[str, dict | None]


def _check_thma(a: GroupAnalysis) -> Outcome:
    p = a.profile
    if p.n_inv <= 3 * p.h * p.h:
        return PASS, None
    return FAIL, {"n": p.n_inv, "h": p.h}


def _check_thmb(a: GroupAnalysis) -> Outcome:
    p = a.profile
    if p.h > 3:
        return NOT_APPLICABLE, None
    if p.f == p.h:
        return PASS, None
    return FAIL, {"h": p.h, "f": p.f}


def _check_numrat(a: GroupAnalysis) -> Outcome:
    p = a.profile
    odd = a.group.order % 2 == 1
    if not ((p.cl_Q == 1) == (p.irr_Q == 1) == odd):
        return FAIL, {"cl_Q": p.cl_Q, "irr_Q": p.irr_Q, "odd": odd, "part": "i"}
    if (p.cl_Q == 2) != (p.irr_Q == 2):
        return FAIL, {"cl_Q": p.cl_Q, "irr_Q": p.irr_Q, "part": "ii"}
    if p.cl_Q == 3 and p.irr_Q != 3:
        return FAIL, {"cl_Q": p.cl_Q, "irr_Q": p.irr_Q, "part": "iii"}
    return PASS, None


def _check_fieldcont(a: GroupAnalysis) -> Outcome:
    fields = a.class_fields
    C = a.classes
    for k, cls in enumerate(C.classes):
        for j in range(cls.element_order):
            target = C.power_class(k, j)
            if not field_contains(fields[target], fields[k]):
                return FAIL, {"class": k, "power": j, "field": fields[k].render()}
    return PASS, None


def _check_krat(a: GroupAnalysis) -> Outcome:
    h = a.profile.h
    for k, fkey in enumerate(a.class_fields):
        if fkey.degree > h:
            return FAIL, {"class": k, "degree": fkey.degree, "h": h}
    return PASS, None


_ALLOWED_RATIONAL_ORDER_SETS = ({1, 2}, {1, 2, 4})


def _check_ratord(a: GroupAnalysis) -> Outcome:
    if a.profile.cl_Q not in (2, 3):
        return NOT_APPLICABLE, None
    orders = set(a.rational_orders)
    if orders in _ALLOWED_RATIONAL_ORDER_SETS:
        return PASS, None
    if len(orders) == 3 and orders >= {1, 2}:
        (q,) = orders - {1, 2}
        if q % 2 and q > 1 and all(q % f for f in range(2, int(q**0.5) + 1)):
            return PASS, None
    return FAIL, {"orders": sorted(orders)}


def _check_clfield(a: GroupAnalysis) -> Outcome:
    if a.profile.h > 3 or a.group.order % 2:
        return NOT_APPLICABLE, None
    for k, p in enumerate(a.prime_bounds):
        if p is None:
            return FAIL, {"class": k, "field": a.class_fields[k].render()}
    return PASS, None


def _check_cut(a: GroupAnalysis) -> Outcome:
    def quad_ok(fields) -> bool:
        return all(
            fkey.is_rational or field_signature(fkey).is_imaginary_quadratic
            for fkey in fields
        )

    by_definition = a.profile.flags.inverse_semi_rational
    by_class_fields = quad_ok(a.class_fields)
    by_char_fields = quad_ok(a.char_fields)
    if by_definition == by_class_fields == by_char_fields:
        return PASS, None
    return FAIL, {
        "definition": by_definition,
        "class_fields": by_class_fields,
        "char_fields": by_char_fields,
    }


def _check_main(a: GroupAnalysis) -> Outcome:
    p = a.profile
    if p.cl_Q != p.irr_Q:
        return NOT_APPLICABLE, None
    quadratic = p.flags.quadratic_rational
    semi = p.flags.semi_rational
    if quadratic != semi:
        return FAIL, {"quadratic_rational": quadratic, "semi_rational": semi}
    if quadratic and not a.perm_isomorphism.isomorphic:
        return FAIL, {"permutation_isomorphic": False}
    return PASS, None


def _check_odd(a: GroupAnalysis) -> Outcome:
    p = a.profile
    if p.h > 3 or p.cl_Q != 1:
        return NOT_APPLICABLE, None
    if not a.perm_isomorphism.isomorphic:
        return FAIL, {"permutation_isomorphic": False}
    if p.f != p.h:
        return FAIL, {"h": p.h, "f": p.f}
    return PASS, None


def _check_brauer(a: GroupAnalysis) -> Outcome:
    report = a.brauer
    if report.ok:
        return PASS, None
    bad = [row for row in report.fixed_counts if row[1] != row[2]]
    return FAIL, {
        "unbalanced_residues": bad[:5],
        "class_orbits": report.class_orbits,
        "char_orbits": report.char_orbits,
    }


def _check_bg(a: GroupAnalysis) -> Outcome:
    from .cyclotomic import euler_phi

    for k, cls in enumerate(a.classes.classes):
        stab = a.stabilizers[k]
        bg = a.bg_orders[k]
        fkey = a.class_fields[k]
        phi = euler_phi(cls.element_order)
        if bg != len(stab) or phi != len(stab) * fkey.degree:
            return FAIL, {
                "class": k,
                "bg_order": bg,
                "stabilizer": len(stab),
                "degree": fkey.degree,
            }
        if fkey != a.class_fields_via_table[k]:
            return FAIL, {
                "class": k,
                "from_conjugacy": fkey.render(),
                "from_table": a.class_fields_via_table[k].render(),
            }
    return PASS, None


def _check_ortho(a: GroupAnalysis) -> Outcome:
    report = a.orthogonality
    if report.ok:
        return PASS, None
    return FAIL, {"violations": list(report.violations)[:5]}


def _check_sigma(a: GroupAnalysis) -> Outcome:
    p = a.profile
    if p.h > 3 or a.group.order % 2:
        return NOT_APPLICABLE, None
    targets = sorted(
        {f for f in a.class_fields if not f.is_rational}, key=lambda f: f.render()
    )
    if not targets:
        return NOT_APPLICABLE, None
    for fkey in targets:
        try:
            result = construct_sigma_for_field(
                a.group, a.classes, a.table, fkey, a.class_fields, a.char_fields
            )
        except HypothesesNotMet as exc:
            return FAIL, {"field": fkey.render(), "error": str(exc)}
        if not result.identity_holds:
            return FAIL, {
                "field": fkey.render(),
                "sigma": result.sigma.residue,
                "fixed_classes": sorted(result.fixed_classes),
                "expected_classes": sorted(result.expected_classes),
                "fixed_chars": sorted(result.fixed_chars),
                "expected_chars": sorted(result.expected_chars),
            }
    return PASS, None


def _primes_of(n: int) -> set[int]:
    out, m, p = set(), n, 2
    while p * p <= m:
        if m % p == 0:
            out.add(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.add(m)
    return out


def _check_gow(a: GroupAnalysis) -> Outcome:
    if not (a.profile.q_of_G.is_rational and a.solvable):
        return NOT_APPLICABLE, None
    primes = _primes_of(a.group.order)
    if primes <= {2, 3, 5}:
        return PASS, None
    return FAIL, {"primes": sorted(primes)}


def _check_cd(a: GroupAnalysis) -> Outcome:
    if not (a.profile.flags.semi_rational and a.solvable):
        return NOT_APPLICABLE, None
    primes = _primes_of(a.group.order)
    if primes <= {2, 3, 5, 7, 13, 17}:
        return PASS, None
    return FAIL, {"primes": sorted(primes)}


def _check_tent(a: GroupAnalysis) -> Outcome:
    if not (a.profile.flags.quadratic_rational and a.solvable):
        return NOT_APPLICABLE, None
    primes = _primes_of(a.group.order)
    if primes <= {2, 3, 5, 7, 13}:
        return PASS, None
    return FAIL, {"primes": sorted(primes)}


def _check_expected(a: GroupAnalysis, spec: GroupSpec) -> Outcome:
    expected = spec.expected_map()
    if not expected:
        return NOT_APPLICABLE, None
    p = a.profile
    actual = {
        "order": a.group.order,
        "h": p.h,
        "f": p.f,
        "cl_Q": p.cl_Q,
        "irr_Q": p.irr_Q,
    }
    bad = {k: (v, actual[k]) for k, v in expected.items() if actual[k] != v}
    if bad:
        return FAIL, {k: {"expected": e, "actual": g} for k, (e, g) in bad.items()}
    return PASS, None


@dataclass(frozen=True)
class Suite:
    suite_id: str
    description: str
    check: Callable


SUITES: dict[str, Suite] = {
    s.suite_id: s
    for s in [
        Suite("S-THMA", "p-class counts bounded by 3 h^2", _check_thma),
        Suite("S-THMB", "h <= 3 forces f = h", _check_thmb),
        Suite("S-NUMRAT", "rational class/character counts agree up to 3", _check_numrat),
        Suite("S-FIELDCONT", "field of a power sits inside the field", _check_fieldcont),
        Suite("S-KRAT", "class field degrees bounded by h", _check_krat),
        Suite("S-RATORD", "rational element orders form an allowed set", _check_ratord),
        Suite("S-CLFIELD", "every class field fits in a prime-cube level", _check_clfield),
        Suite("S-CUT", "inverse semi-rational iff all fields imaginary quadratic or Q", _check_cut),
        Suite("S-MAIN", "quadratic rational iff semi-rational when counts agree", _check_main),
        Suite("S-ODD", "one rational class with h <= 3 gives isomorphic actions", _check_odd),
        Suite("S-BRAUER", "fixed points and orbits agree on both actions", _check_brauer),
        Suite("S-BG", "stabilizer, normalizer index and both field routes agree", _check_bg),
        Suite("S-ORTHO", "orthogonality relations hold exactly", _check_ortho),
        Suite("S-SIGMA", "constructed automorphism fixes exactly the stated sets", _check_sigma),
        Suite("S-GOW", "solvable rational groups use primes 2,3,5", _check_gow),
        Suite("S-CD", "solvable semi-rational groups use primes up to 17", _check_cd),
        Suite("S-TENT", "solvable quadratic rational groups use primes up to 13", _check_tent),
        Suite("S-EXPECTED", "declared expectations match computed invariants", _check_expected),
    ]
}

ALL_SUITE_IDS = tuple(SUITES)


def run_suite(
    suite_id: str,
    spec: GroupSpec,
    analysis: GroupAnalysis | None = None,
    store: VerdictStore | None = None,
) -> VerdictRecord:
    """Run one suite on one group, consulting/filling the store if given."""
    if suite_id not in SUITES:
        raise UnknownSuite(f"unknown suite id {suite_id!r} (try one of {', '.join(SUITES)})")
    spec_hash = spec.content_hash()
    if store is not None:
        cached = store.get(spec_hash, suite_id)
        if cached is not None:
            return cached
    if analysis is None:
        analysis = spec.analysis()
    check = SUITES[suite_id].check
    if check is _check_expected:
        verdict, witness = check(analysis, spec)
    else:
        verdict, witness = check(analysis)
    record = VerdictRecord(
        group=spec.name,
        order=analysis.group.order,
        suite=suite_id,
        verdict=verdict,
        witness=witness,
        spec_hash=spec_hash,
    )
    if store is not None:
        store.add(record)
    return record


def _run_spec(args: tuple[GroupSpec, tuple[str, ...]]) -> tuple[list[dict], dict]:
    spec, suite_ids = args
    analysis = spec.analysis()
    records = [run_suite(sid, spec, analysis=analysis).to_payload() for sid in suite_ids]
    profile = analysis.profile.to_payload()
    profile["name"] = spec.name
    return records, profile


PROFILE_KEY = "PROFILE"  # pseudo-suite under which profiles are cached


def run_corpus(
    specs: list[GroupSpec],
    suite_ids: tuple[str, ...] = ALL_SUITE_IDS,
    store: VerdictStore | None = None,
    jobs: int = 1,
) -> tuple[list[VerdictRecord], list[dict]]:
    """All requested suites over all groups; returns verdicts and profiles."""
    for sid in suite_ids:
        if sid not in SUITES:
            raise UnknownSuite(f"unknown suite id {sid!r}")
    results_by_spec: dict[int, tuple[list[VerdictRecord], dict]] = {}
    pending: list[GroupSpec] = []
    pending_idx: list[int] = []
    for idx, spec in enumerate(specs):
        hit = None
        if store is not None:
            h = spec.content_hash()
            cached = [store.get(h, sid) for sid in suite_ids]
            prof = store.get(h, PROFILE_KEY)
            if prof is not None and all(c is not None for c in cached):
                profile = dict(prof.witness or {})
                profile["name"] = spec.name
                hit = (list(cached), profile)
        if hit is None:
            pending.append(spec)
            pending_idx.append(idx)
        else:
            results_by_spec[idx] = hit

    tasks = [(spec, suite_ids) for spec in pending]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            computed = list(pool.map(_run_spec, tasks, chunksize=4))
    else:
        computed = [_run_spec(t) for t in tasks]
    for (payloads, profile), idx, spec in zip(computed, pending_idx, pending):
        recs = [VerdictRecord.from_payload(p) for p in payloads]
        if store is not None:
            for record in recs:
                store.add(record)
            witness = {k: v for k, v in profile.items() if k != "name"}
            store.add(
                VerdictRecord(
                    group=spec.name,
                    order=profile["order"],
                    suite=PROFILE_KEY,
                    verdict=PASS,
                    witness=witness,
                    spec_hash=spec.content_hash(),
                )
            )
        results_by_spec[idx] = (recs, profile)
    records: list[VerdictRecord] = []
    profiles: list[dict] = []
    for idx in range(len(specs)):
        recs, profile = results_by_spec[idx]
        records.extend(recs)
        profiles.append(profile)
    return records, profiles


@dataclass(frozen=True)
class ConjectureScan:
    bound: int
    groups_scanned: int
    max_order: int
    counterexamples: tuple[dict, ...]

    def lines(self) -> list[str]:
        out = [
            f"conjecture scan: min(f,h) <= {self.bound} forces f = h",
            f"coverage: {self.groups_scanned} built-in/ingested groups of order <= {self.max_order} "
            "(not the full isomorphism-class census)",
        ]
        if self.counterexamples:
            out.append(f"counterexamples: {len(self.counterexamples)}")
            for c in self.counterexamples:
                out.append(f"  {c['name']}: order={c['order']} h={c['h']} f={c['f']}")
        else:
            out.append("counterexamples: none")
        return out


def scan_conjecture(profiles: list[dict], bound: int = 5) -> ConjectureScan:
    """List groups with min(f, h) <= bound but f != h (expected: none)."""
    hits = []
    max_order = 0
    for profile in profiles:
        max_order = max(max_order, profile["order"])
        h, f = profile["h"], profile["f"]
        if min(h, f) <= bound and h != f:
            hits.append(
                {"name": profile["name"], "order": profile["order"], "h": h, "f": f}
            )
    return ConjectureScan(
        bound=bound,
        groups_scanned=len(profiles),
        max_order=max_order,
        counterexamples=tuple(hits),
    )


def summary_report(records: list[VerdictRecord], profiles: list[dict]) -> str:
    """Plain-text summary: per-suite verdict counts, then per-group lines."""
    lines = []
    by_suite: dict[str, dict[str, int]] = {}
    for record in records:
        counts = by_suite.setdefault(record.suite, {PASS: 0, FAIL: 0, NOT_APPLICABLE: 0})
        counts[record.verdict] += 1
    for sid in sorted(by_suite):
        c = by_suite[sid]
        lines.append(
            f"suite {sid}: PASS={c[PASS]} FAIL={c[FAIL]} NA={c[NOT_APPLICABLE]}"
        )
    for record in records:
        if record.verdict == FAIL:
            lines.append(f"FAIL {record.suite} {record.group}: {record.witness}")
    for profile in profiles:
        flags = profile["flags"]
        if flags["rational"]:
            flag_text = "rational"
        elif flags["inverse_semi_rational"]:
            flag_text = "inverse_semi_rational"
        else:
            parts = [
                key
                for key in ("semi_rational", "quadratic_rational")
                if flags[key]
            ]
            flag_text = ",".join(parts) if parts else f"deg_max={flags['degree_max']}"
        lines.append(
            f"{profile['name']} {profile['order']} h={profile['h']} f={profile['f']} "
            f"clQ={profile['cl_Q']} irrQ={profile['irr_Q']} {flag_text}"
        )
    return "\n".join(lines) + "\n"
