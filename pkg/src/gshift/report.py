"""The implication table between the eight entropy predicates.

Rows of evidence are predicate vectors of finite fibre presentations: every
finite fibre gallery entry plus rejection-sampled random ones.  Implications
i..xiv are checked on each row.  Cells of the predicate matrix that the
implications (with the four complementary pairs) neither force nor exclude
are filled with observed separating examples.

The normative content of the table is implications i..xiv together with the
complementary pairs and the separating gallery examples; no further cells are
asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import gallery
from .analyzer import COMPLEMENTS, IMPLICATIONS, PREDICATES, EntropyReport, implication_check, predicate_vector
from .generate import random_finite_fibre

# the separations the table is expected to exhibit, with the gallery entry that shows each
REQUIRED_SEPARATIONS = (
    (("pi2", True), ("rho2", False), "theta2"),
    (("pi2", True), ("rho2", True), "theta3"),
    (("rho1", True), ("pi1", False), "theta2"),
    (("rho3", True), ("rho2", True), "theta1_v"),
)


def literal_closure() -> dict:
    """For each literal (predicate, value), the set of literals it forces."""
    edges = {}

    def add(a, b):
        edges.setdefault(a, set()).add(b)

    for _, a, b in IMPLICATIONS:
        add((a, True), (b, True))
        add((b, False), (a, False))
    for a, b in COMPLEMENTS:
        for v in (True, False):
            add((a, v), (b, not v))
            add((b, v), (a, not v))
    out = {}
    for lit in product(PREDICATES, (True, False)):
        seen = {lit}
        stack = [lit]
        while stack:
            for nxt in edges.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        out[lit] = seen
    return out


@dataclass(frozen=True)
class Row:
    source: str
    report: EntropyReport


@dataclass
class TableA:
    rows: list
    implication_status: list          # (label, a, b, rows where a holds, violating sources)
    matrix: dict                      # (a, b) -> "forced" | "excluded" | "open"
    separations: list                 # (a, b, both_source, only_a_source) for open cells
    required: list                    # (lit_a, lit_b, expected source, ok)
    skipped: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(len(s[4]) for s in self.implication_status)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and all(r[3] for r in self.required)


def evidence_rows(samples: int, seed: int = 0, size_budget: int = 4) -> tuple:
    rows, skipped = [], []
    for name in gallery.names():
        r = predicate_vector(gallery.get(name).presentation)
        if r.finite_fibre_weighted:
            rows.append(Row(name, r))
        else:
            skipped.append(name)
    for i in range(samples):
        s, P = random_finite_fibre(seed + i, size_budget)
        rows.append(Row(f"random:{s}", predicate_vector(P)))
    return rows, skipped


def table_a(samples: int = 200, seed: int = 0) -> TableA:
    rows, skipped = evidence_rows(samples, seed)
    status = []
    bad = {r.source: set(implication_check(r.report)) for r in rows}
    for label, a, b in IMPLICATIONS:
        holding = sum(1 for r in rows if r.report.predicates[a])
        status.append((label, a, b, holding, [src for src, v in bad.items() if label in v]))

    closure = literal_closure()
    matrix, seps = {}, []
    for a in PREDICATES:
        for b in PREDICATES:
            if a == b:
                continue
            forced = closure[(a, True)]
            if (b, True) in forced:
                matrix[(a, b)] = "forced"
            elif (b, False) in forced:
                matrix[(a, b)] = "excluded"
            else:
                matrix[(a, b)] = "open"
                both = next((r.source for r in rows if r.report.predicates[a] and r.report.predicates[b]), None)
                only = next((r.source for r in rows if r.report.predicates[a] and not r.report.predicates[b]), None)
                seps.append((a, b, both, only))

    by_name = {r.source: r.report.predicates for r in rows}
    required = []
    for (pa, va), (pb, vb), name in REQUIRED_SEPARATIONS:
        p = by_name.get(name)
        required.append(((pa, va), (pb, vb), name, p is not None and p[pa] == va and p[pb] == vb))
    return TableA(rows, status, matrix, seps, required, skipped)
