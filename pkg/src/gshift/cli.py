"""Command-line front end: ``gshift classify|verify|brute|gallery|table-a``.

Exit codes: 0 success, 2 input error, 3 classifier/witness disagreement or a
failed check, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import analyzer, finite_lab, gallery, witness
from .analyzer import ConsistencyError, EntropyReport
from .field import MAX_CLI_PRIME
from .presentation import (
    CycleFamily,
    InvalidPresentation,
    NodeAddress,
    Presentation,
    PresentationError,
    iter_nodes,
)
from .report import table_a
from .serialize import load

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE, EXIT_CAP = 0, 2, 3, 4
FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    radius: int = witness.DEFAULT_RADIUS
    target_n: int = witness.DEFAULT_TARGET_N
    kmax: int = witness.DEFAULT_KMAX
    samples: int = 200
    seed: int = 0
    max_states: int = finite_lab.STATE_CAP
    count: int = 5
    steps: int = 500
    format: str = "text"

    def __post_init__(self):
        for name in ("radius", "target_n", "kmax", "samples", "max_states", "count", "steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.radius < self.target_n:
            raise ValueError("radius must be >= target-n")


class InputError(Exception):
    pass


def _load(path: str) -> Presentation:
    try:
        P = load(path)
    except InvalidPresentation as e:
        raise InputError("invalid presentation:\n" + "\n".join(f"  {v}" for v in e.violations)) from None
    except (OSError, PresentationError) as e:
        raise InputError(str(e)) from None
    if P.field.p > MAX_CLI_PRIME:
        raise InputError(f"field size {P.field.p} exceeds the supported maximum {MAX_CLI_PRIME}")
    return P


# --------------------------------------------------------------------------
# rendering


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def render_report(r: EntropyReport, fmt: str) -> str:
    doc = r.to_json()
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    flat = [(k, v) for k, v in doc.items() if k != "predicates"]
    flat += [(k, v) for k, v in doc["predicates"].items()]
    if fmt == "csv":
        return _csv([("field", "value")] + [(k, json.dumps(v) if isinstance(v, bool) else v) for k, v in flat])
    return "".join(f"{k}: {json.dumps(v) if isinstance(v, bool) else v}\n" for k, v in flat)


def render_items(items: list, fmt: str, extra: Optional[dict] = None) -> str:
    """``items`` are (check, status, detail) triples."""
    if fmt == "json":
        doc = {"checks": [{"check": c, "status": s, "detail": d} for c, s, d in items]}
        doc.update(extra or {})
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        return _csv([("check", "status", "detail")] + list(items))
    width = max((len(c) for c, _, _ in items), default=0)
    lines = [f"{c.ljust(width)}  {s:<13} {d}" for c, s, d in items]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# verify


def _verify_tau(P: Presentation, cfg: RunConfig, use_weights: bool) -> tuple:
    tag = "weighted" if use_weights else "unweighted"
    ts = analyzer.tau_sup(P, use_weights)
    wit = witness.tau_witness_search(P, use_weights, cfg.target_n, cfg.radius)
    view = P if use_weights else P.unweighted()
    if not ts.bounded:
        if wit is not None and wit.revalidate(view):
            return (f"tau_{tag}", "corroborated", f"Unbounded; segment of length {cfg.target_n} from {wit.start}")
        return (f"tau_{tag}", "DISAGREE", f"Unbounded but no segment of length {cfg.target_n} within radius {cfg.radius}")
    b = ts.bound
    if b >= cfg.target_n:
        return (f"tau_{tag}", "inconclusive", f"Bounded({b}) is not below target-n {cfg.target_n}")
    if wit is not None:
        return (f"tau_{tag}", "DISAGREE", f"Bounded({b}) but a segment of length {cfg.target_n} exists")
    at_b = witness.tau_witness_search(P, use_weights, b, max(cfg.radius, b))
    if at_b is None:
        # b = 0 with no nonzero weight anywhere in the cover is the empty case
        return (f"tau_{tag}", "corroborated", f"Bounded({b}); NotFound at {cfg.target_n}, none at {b} in cover")
    above = witness.tau_witness_search(P, use_weights, b + 1, max(cfg.radius, b + 1))
    if above is not None:
        return (f"tau_{tag}", "DISAGREE", f"Bounded({b}) but a segment of length {b + 1} exists")
    return (f"tau_{tag}", "proved", f"Bounded({b}); segment of length {b} from {at_b.start}, NotFound above")


def period_agreement(P: Presentation, k_max: int) -> list:
    """(check, status, detail) for the period spectrum against the analyzer's Lambda."""
    spectrum = witness.period_spectrum_scan(P, k_max)
    reason = analyzer.cset_reason(P, True)
    lam = analyzer.compute_lambda(P)
    out = []
    for c in P.components:
        if not isinstance(c, CycleFamily):
            continue
        entries = [e for e in spectrum if e.component == c.id]
        lengths = [e.length for e in entries]
        member_ok = all(e.in_lambda == lam.contains(NodeAddress(c.id, e.member, 0)) for e in entries)
        if not member_ok:
            out.append((f"periods_{c.id}", "DISAGREE", "Lambda membership differs from the analyzer"))
            continue
        if c.lengths.bounded:
            out.append((f"periods_{c.id}", "corroborated", f"constant lengths {lengths[0]}"))
            continue
        increasing = all(x < y for x, y in zip(lengths, lengths[1:]))
        attributed = c.id in reason.unbounded_periods
        all_in = all(e.in_lambda for e in entries)
        detail = f"lengths {lengths}, in Lambda {[e.in_lambda for e in entries]}"
        if not increasing or (attributed and not all_in):
            out.append((f"periods_{c.id}", "DISAGREE", detail))
        elif not attributed and all_in:
            out.append((f"periods_{c.id}", "inconclusive", detail + "; leaves Lambda beyond kmax"))
        else:
            out.append((f"periods_{c.id}", "corroborated", detail))
    for e in spectrum:
        if e.component not in {c.id for c in P.components if isinstance(c, CycleFamily)}:
            ok = e.in_lambda == lam.contains(NodeAddress(e.component, 1, e.member))
            out.append((f"cycle_{e.component}_{e.member}", "proved" if ok else "DISAGREE",
                        f"length {e.length}, in Lambda {e.in_lambda}"))
    return out


def fibre_agreement(P: Presentation, cfg: RunConfig, use_weights: bool) -> tuple:
    tag = "weighted" if use_weights else "unweighted"
    ok, gap = analyzer.is_finite_fibre(P, use_weights)
    if ok:
        hits = witness.fibre_gap_scan(P, use_weights, len(gap.nodes) + cfg.count, cfg.radius)
        if set(hits) <= set(gap.nodes):
            return (f"fibre_{tag}", "corroborated", f"finite; gap {[str(a) for a in hits]}")
        return (f"fibre_{tag}", "DISAGREE", f"finite gap {gap.nodes} but scan found {[str(a) for a in hits]}")
    hits = witness.fibre_gap_scan(P, use_weights, cfg.count, cfg.radius)
    if len(hits) >= cfg.count:
        return (f"fibre_{tag}", "corroborated", f"infinite in {list(gap.infinite_in)}; {len(hits)} hits")
    return (f"fibre_{tag}", "DISAGREE", f"infinite in {list(gap.infinite_in)} but only {len(hits)} hits")


def orbit_agreement(P: Presentation, cfg: RunConfig) -> list:
    out = []
    first = {}
    for a in iter_nodes(P, 1):
        first.setdefault(a.component, a)
    for c in P.components:
        a = first[c.id]
        qp = analyzer.is_quasi_periodic(P, a)
        res = witness.nonqp_witness(P, a, cfg.steps)
        if isinstance(res, witness.CycleDetected):
            status = "proved" if qp else "DISAGREE"
            detail = f"{a} enters a {res.period}-cycle after {res.preperiod} steps"
        else:
            status = "inconclusive" if qp else "corroborated"
            detail = f"{a} injective for {res.steps} steps"
        out.append((f"orbit_{c.id}", status, detail))
    return out


def verify_items(P: Presentation, cfg: RunConfig) -> list:
    items = [_verify_tau(P, cfg, True), _verify_tau(P, cfg, False),
             fibre_agreement(P, cfg, True), fibre_agreement(P, cfg, False)]
    items += period_agreement(P, cfg.kmax)
    items += orbit_agreement(P, cfg)
    return items


# --------------------------------------------------------------------------
# brute


def brute_items(P: Presentation, cfg: RunConfig) -> tuple:
    S, _ = finite_lab.to_finite_system(P)
    if S.states > cfg.max_states:
        raise finite_lab.StateSpaceTooLarge(f"{S.states} states exceeds --max-states {cfg.max_states}")
    items = []

    def record(name, ok, detail=""):
        items.append((name, "pass" if ok else "FAIL", detail))

    other = finite_lab.random_system(random.Random(cfg.seed), S.p, S.n)
    record("composition_law", finite_lab.check_composition_law(S, other, cfg.samples, cfg.seed)
           and finite_lab.check_composition_law(other, S, cfg.samples, cfg.seed), "with a seeded partner, k <= 4")
    record("fibre_size", finite_lab.fibre_size_check(S, cfg.max_states),
           f"p^{len(finite_lab.fibre_gap_indices(S))}")
    try:
        sc = finite_lab._surjective_cover_codes(S, cfg.max_states)
        record("surjective_cover", True, f"{len(sc)} configurations, zero on Upsilon")
    except finite_lab.LabAssertionError as e:
        record("surjective_cover", False, str(e))
    nz = S.with_nonzero_weights()
    L = math.lcm(*finite_lab.cycle_lengths(S.phi))
    record("fix_bijection", finite_lab.fix_bijection_check(finite_lab.power_system(nz, L), cfg.max_states),
           f"power {L} of the nonzero-weight variant")
    if S.n <= finite_lab.QUOTIENT_MAX_N:
        record("quotient", finite_lab.quotient_check(S.phi))
    else:
        items.append(("quotient", "skipped", f"n={S.n} > {finite_lab.QUOTIENT_MAX_N}"))
    record("star_identity", all(finite_lab.star_identity_check(S, b, finite_lab.period_of(S.phi, b))
                                for b in finite_lab.periodic_indices(S.phi)))
    record("indicator_conjugacy", finite_lab.indicator_conjugacy_check(nz, cfg.samples, cfg.seed))
    m, n = finite_lab.quasi_period_pair(S, cfg.max_states)
    record("quasi_period_pair", True, f"({m}, {n})")
    brute_tau = finite_lab.tau_sup_bruteforce(S)
    ts = analyzer.tau_sup(P)
    record("tau_agreement", ts.bounded and ts.bound == brute_tau, f"analyzer {ts}, enumeration {brute_tau}")
    zero = analyzer.EntClass.ZERO
    record("dichotomy", analyzer.ent_set_class(P) is zero and analyzer.ent_cset_class(P) is zero,
           "ent_set and ent_cset are Zero")
    return items, (m, n)


# --------------------------------------------------------------------------
# commands


def cmd_classify(args, cfg: RunConfig) -> int:
    P = _load(args.file)
    try:
        r = analyzer.predicate_vector(P)
    except ConsistencyError as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_DISAGREE
    sys.stdout.write(render_report(r, cfg.format))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    P = _load(args.file)
    items = verify_items(P, cfg)
    sys.stdout.write(render_items(items, cfg.format))
    return EXIT_DISAGREE if any(s == "DISAGREE" for _, s, _ in items) else EXIT_OK


def cmd_brute(args, cfg: RunConfig) -> int:
    P = _load(args.file)
    try:
        items, pair = brute_items(P, cfg)
    except finite_lab.NotFinitePresentation as e:
        raise InputError(str(e)) from None
    except finite_lab.StateSpaceTooLarge as e:
        print(f"state cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.write(render_items(items, cfg.format, {"quasi_period_pair": list(pair)}))
    return EXIT_OK if all(s in ("pass", "skipped") for _, s, _ in items) else EXIT_DISAGREE


def cmd_gallery(args, cfg: RunConfig) -> int:
    if args.action == "list":
        entries = [gallery.get(n) for n in gallery.names()]
        if cfg.format == "json":
            doc = [{"name": e.name, "description": e.description, "expected": e.expected} for e in entries]
            sys.stdout.write(json.dumps(doc, indent=2) + "\n")
        elif cfg.format == "csv":
            sys.stdout.write(_csv([("name", "description", "expected")]
                                  + [(e.name, e.description, json.dumps(e.expected)) for e in entries]))
        else:
            for e in entries:
                exp = ", ".join(f"{k}={json.dumps(v) if isinstance(v, bool) else v}" for k, v in e.expected.items())
                print(f"{e.name}: {e.description}\n    {exp}")
        return EXIT_OK
    if not args.name:
        raise InputError("gallery emit needs an entry name")
    try:
        text = gallery.bundled_text(args.name)
    except gallery.UnknownEntry:
        raise InputError(f"unknown gallery entry {args.name!r}; known: {', '.join(gallery.names())}") from None
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def render_table_a(t, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "implications": [{"label": l, "if": a, "then": b, "rowsWithPremise": n, "violations": v}
                             for l, a, b, n, v in t.implication_status],
            "matrix": {f"{a}->{b}": s for (a, b), s in t.matrix.items()},
            "separations": [{"if": a, "then": b, "both": x, "premiseOnly": y} for a, b, x, y in t.separations],
            "required": [{"left": list(l), "right": list(r), "entry": n, "ok": ok} for l, r, n, ok in t.required],
            "rows": len(t.rows),
            "skippedNotFiniteFibre": t.skipped,
            "violations": t.violations,
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        rows = [("kind", "label", "if", "then", "status", "detail")]
        for l, a, b, n, v in t.implication_status:
            rows.append(("implication", l, a, b, "holds" if not v else "VIOLATED", f"{n} rows with premise"))
        for (a, b), s in t.matrix.items():
            rows.append(("cell", "", a, b, s, ""))
        for l, r, n, ok in t.required:
            rows.append(("separation", n, f"{l[0]}={l[1]}", f"{r[0]}={r[1]}", "witnessed" if ok else "MISSING", ""))
        return _csv(rows)
    lines = [f"evidence: {len(t.rows)} finite fibre presentations "
             f"(gallery entries skipped as not finite fibre: {', '.join(t.skipped) or 'none'})", ""]
    held = sum(1 for s in t.implication_status if not s[4])
    lines.append(f"implications: {held}/{len(t.implication_status)} hold")
    for l, a, b, n, v in t.implication_status:
        lines.append(f"  {l:>5}  {a} => {b:<5} {'holds' if not v else 'VIOLATED by ' + ', '.join(v[:5])}"
                     f"  ({n} rows with premise)")
    preds = analyzer.PREDICATES
    lines += ["", "matrix (row => column): + forced, x excluded, ? open", "       " + " ".join(f"{p:>5}" for p in preds)]
    sym = {"forced": "+", "excluded": "x", "open": "?"}
    for a in preds:
        cells = ["    ." if a == b else f"{sym[t.matrix[(a, b)]]:>5}" for b in preds]
        lines.append(f"{a:>6} " + " ".join(cells))
    lines += ["", "open cells, observed both ways:"]
    for a, b, x, y in t.separations:
        lines.append(f"  {a} with {b}: {x or 'none seen'};  {a} without {b}: {y or 'none seen'}")
    lines += ["", "separating examples:"]
    for l, r, n, ok in t.required:
        lines.append(f"  {l[0]}={l[1]} with {r[0]}={r[1]}: {n} {'witnessed' if ok else 'MISSING'}")
    return "\n".join(lines) + "\n"


def cmd_table_a(args, cfg: RunConfig) -> int:
    t = table_a(cfg.samples, cfg.seed)
    sys.stdout.write(render_table_a(t, cfg.format))
    return EXIT_OK if t.ok else EXIT_DISAGREE


# --------------------------------------------------------------------------
# argument parsing


def _add_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = RunConfig()

    def default(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--format", choices=FORMATS, default=default(d.format))
    p.add_argument("--seed", type=int, default=default(d.seed))
    p.add_argument("--radius", type=int, default=default(d.radius))
    p.add_argument("--target-n", dest="target_n", type=int, default=default(d.target_n))
    p.add_argument("--kmax", type=int, default=default(d.kmax))
    p.add_argument("--samples", type=int, default=default(d.samples))
    p.add_argument("--max-states", dest="max_states", type=int, default=default(d.max_states))
    p.add_argument("--count", type=int, default=default(d.count), help="fibre-gap hits to look for")
    p.add_argument("--steps", type=int, default=default(d.steps), help="orbit steps for quasi-periodicity")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gshift", description="Entropy classification of weighted generalized shifts.")
    _add_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, helptext in (("classify", "classification report"),
                           ("verify", "witness searches against the classification"),
                           ("brute", "exhaustive identity checks on a finite presentation")):
        sp = sub.add_parser(verb, help=helptext)
        sp.add_argument("file")
        _add_flags(sp, suppress=True)
    gp = sub.add_parser("gallery", help="list or emit bundled presentations")
    gp.add_argument("action", choices=("list", "emit"))
    gp.add_argument("name", nargs="?")
    gp.add_argument("-o", "--output")
    _add_flags(gp, suppress=True)
    tp = sub.add_parser("table-a", help="implication table between the entropy predicates")
    _add_flags(tp, suppress=True)
    return parser


COMMANDS = {"classify": cmd_classify, "verify": cmd_verify, "brute": cmd_brute,
            "gallery": cmd_gallery, "table-a": cmd_table_a}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        cfg = RunConfig(args.radius, args.target_n, args.kmax, args.samples, args.seed,
                        args.max_states, args.count, args.steps, args.format)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.verb](args, cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
