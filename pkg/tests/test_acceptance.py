"""Acceptance criteria 1-6, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or directly as a script.
"""

import random
import time

import pytest

from gshift import analyzer, gallery
from gshift import finite_lab as fl
from gshift.analyzer import ConsistencyError, EntClass, predicate_vector
from gshift.generate import random_presentation
from gshift.presentation import CycleFamily, Finite, Presentation
from gshift.report import table_a
from gshift.witness import fibre_gap_scan, period_spectrum_scan, tau_witness_search



def report(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"


def suite_systems():
    rng = random.Random(20240)
    for p in (2, 3, 5):
        for i in range(100):
            n = rng.randint(1, fl.max_n_for(p))
            yield p, i, fl.random_system(rng, p, n)


# -- 1 -----------------------------------------------------------------------

EXPECTED_CLASSES = {
    "counterexample_3_4": {"finiteFibreWeighted": False, "finiteFibreUnweighted": True},
    "badr5000": {"entSetWeighted": "Zero", "entSetUnweighted": "Infinite",
                 "entCsetUnweighted": "Infinite", "finiteFibreWeighted": False},
    "theta1_u": {"entCsetWeighted": "Infinite", "entCsetUnweighted": "Infinite"},
    "theta1_v": {"entCsetWeighted": "Zero"},
    "theta2": {"entSetWeighted": "Infinite", "entSetUnweighted": "Infinite",
               "entCsetWeighted": "Zero", "entCsetUnweighted": "Zero"},
    "theta3": {"entSetWeighted": "Infinite", "entSetUnweighted": "Infinite",
               "entCsetWeighted": "Infinite", "entCsetUnweighted": "Infinite"},
}


def criterion_1():
    t = time.perf_counter()
    wrong = {}
    for name, claim in EXPECTED_CLASSES.items():
        doc = predicate_vector(gallery.get(name).presentation).to_json()
        diff = {k: (v, doc[k]) for k, v in claim.items() if doc[k] != v}
        if diff:
            wrong[name] = diff
    dt = time.perf_counter() - t
    return not wrong and dt < 1.0, f"{len(EXPECTED_CLASSES)} example classifications exact, {dt:.3f}s (< 1s); wrong={wrong}"


# -- 2 and 3 -------------------------------------------------------------------


def criterion_2():
    t = time.perf_counter()
    failures = []
    count = 0
    for p, i, S in suite_systems():
        assert S.states <= fl.EXHAUSTIVE_LIMIT
        res = fl.identity_suite(S, seed=i)
        count += 1
        if not all(res.values()):
            failures.append((p, i, {k for k, v in res.items() if not v}))
    dt = time.perf_counter() - t
    return not failures and dt < 60, f"{count} systems, 9 identity families exhaustive, {dt:.1f}s (< 60s); failures={failures[:3]}"


def criterion_3():
    bad = []
    count = 0
    for p, i, S in suite_systems():
        P = Presentation(S.field, [Finite("g", S.phi, S.weights)])
        if analyzer.ent_set_class(P) is not EntClass.ZERO or analyzer.ent_cset_class(P) is not EntClass.ZERO:
            bad.append((p, i, "class"))
        m, n = fl.quasi_period_pair(S)
        for a in range(S.n):
            same = fl._phi_power(S.phi, a, m) == fl._phi_power(S.phi, a, n)
            if not (1 <= m < n) or not (same or not fl._weight_product(S, a, m)):
                bad.append((p, i, "pair"))
        if analyzer.tau_sup(P).bound != fl.tau_sup_bruteforce(S):
            bad.append((p, i, "tau"))
        count += 1
    return not bad, f"{count} finite systems: ent_set = ent_cset = Zero, quasi-period pair criterion, tau exact; bad={bad[:3]}"


# -- 4 -------------------------------------------------------------------------


def criterion_4():
    found = []
    checked = 0
    reports = [(name, gallery.get(name).presentation) for name in gallery.names()]
    reports += [(f"seed {s}", random_presentation(s, 4)) for s in range(1200)]
    for label, P in reports:
        try:
            r = predicate_vector(P)
        except ConsistencyError:
            found.append(label)
            continue
        checked += 1
        if r.finite_fibre_weighted and r.ent_set_unweighted is EntClass.INFINITE and r.ent_set_weighted is EntClass.ZERO:
            found.append(label)
    # the guard inside the analyzer must fire if such an instance ever appears
    P = gallery.get("theta2").presentation
    real = analyzer.tau_sup
    fired = False
    try:
        analyzer.tau_sup = lambda Q, use_weights=True: analyzer.TauSup(0) if use_weights else real(Q, use_weights)
        predicate_vector(P)
    except ConsistencyError:
        fired = True
    finally:
        analyzer.tau_sup = real
    return not found and fired, (f"{checked} presentations (gallery + 1200 seeds), forbidden combination seen "
                                 f"{len(found)} times; guard fires on a forced instance: {fired}")


# -- 5 -------------------------------------------------------------------------


def criterion_5():
    t = table_a(samples=200, seed=0)
    random_rows = sum(1 for r in t.rows if r.source.startswith("random:"))
    gal_rows = len(t.rows) - random_rows
    ok = t.violations == 0 and all(r[3] for r in t.required) and random_rows >= 200
    seps = ", ".join(f"{a[0]}{'' if a[1] else '!'}&{b[0]}{'' if b[1] else '!'}:{n}" for a, b, n, _ in t.required)
    return ok, (f"{gal_rows} gallery + {random_rows} random finite fibre rows, {t.violations} violations of i-xiv; "
                f"separations {seps}")


# -- 6 -------------------------------------------------------------------------


def criterion_6():
    t0 = time.perf_counter()
    problems = []
    for name in gallery.names():
        P = gallery.get(name).presentation
        unbounded = not analyzer.tau_sup(P).bounded
        found = tau_witness_search(P, True, 50, 200) is not None
        if found != unbounded:
            problems.append((name, "tau"))
        spectrum = period_spectrum_scan(P, 8)
        attributed = set(analyzer.cset_reason(P).unbounded_periods)
        for c in P.components:
            if isinstance(c, CycleFamily) and not c.lengths.bounded:
                entries = [e for e in spectrum if e.component == c.id]
                lengths = [e.length for e in entries]
                if any(x >= y for x, y in zip(lengths, lengths[1:])):
                    problems.append((name, "increase"))
                if any(e.in_lambda != (c.id in attributed) for e in entries):
                    problems.append((name, "lambda"))
        ok, gap = analyzer.is_finite_fibre(P)
        if ok:
            hits = fibre_gap_scan(P, True, len(gap.nodes) + 5, 200)
            if not set(hits) <= set(gap.nodes):
                problems.append((name, "gap"))
        elif len(fibre_gap_scan(P, True, 5, 200)) < 5:
            problems.append((name, "gap"))
    dt = time.perf_counter() - t0
    return not problems and dt < 10, f"{len(gallery.names())} gallery entries, witnesses agree, {dt:.2f}s (< 10s); problems={problems}"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n]()
    with capsys.disabled():
        print("\n" + report(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        print(report(n, *fn()))
