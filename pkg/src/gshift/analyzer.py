"""Exact classification of weighted generalized shifts on presentations.

Every verdict here is read off the finite structure of the presentation
(word prefixes, zero offsets inside repeating blocks, bounded vs unbounded
cycle lengths).  Nothing is decided by truncated simulation; the ``witness``
module exists to corroborate these verdicts from the definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .presentation import (
    BackwardTail,
    BiRay,
    CycleFamily,
    EventuallyPeriodicWord,
    Finite,
    ForwardRay,
    NodeAddress,
    Presentation,
    TailFamily,
    check_address,
    eval_phi,
    eval_weight,
)


class EntClass(str, Enum):
    ZERO = "Zero"
    INFINITE = "Infinite"
    NOT_FINITE_FIBRE = "NotFiniteFibre"

    def __str__(self):
        return self.value


class HypothesisNotMet(ValueError):
    pass


class ConsistencyError(AssertionError):
    """A classification contradicting a proven impossibility; always a bug."""


def _view(P: Presentation, use_weights: bool) -> Presentation:
    return P if use_weights else P.unweighted()


# --------------------------------------------------------------------------
# run-length helpers on eventually periodic words


def _max_run(values) -> int:
    best = cur = 0
    for x in values:
        cur = cur + 1 if x else 0
        best = max(best, cur)
    return best


def _linear_max_run(w: EventuallyPeriodicWord) -> int:
    """Longest run of nonzero letters in an infinite word whose block has a zero."""
    return _max_run(w.expand(len(w.prefix) + 2 * len(w.block)))


def _trailing_run(w: EventuallyPeriodicWord, end: int) -> int:
    """Number of consecutive nonzero letters at positions end-1, end-2, ..."""
    if not w.block_has_zero and end > len(w.prefix):
        pz = w.prefix_zeros()
        return end - 1 - pz[-1] if pz else end
    n = 0
    i = end - 1
    while i >= 0 and w.at(i):
        n += 1
        i -= 1
    return n


def _cyclic_max_run(w: EventuallyPeriodicWord, ell: int) -> int:
    """Longest injective nonzero segment (in nodes) on the cycle word[0..ell-1]."""
    fz = w.first_zero()
    if fz is None or ell <= fz:
        return ell
    inner = _max_run(w.expand(min(ell, len(w.prefix) + 2 * len(w.block))))
    return min(ell, max(inner, _trailing_run(w, ell) + fz))


def _family_members(c: CycleFamily):
    """Member indices whose cycle words exhibit every possible run profile."""
    w = c.weights
    if c.lengths.bounded:
        yield 1
        return
    big = len(w.prefix) + 2 * len(w.block) + 1
    seen = set()
    k = 1
    while True:
        ell = c.lengths.length(k)
        if ell >= big:
            r = (ell - len(w.prefix)) % len(w.block)
            if r in seen:
                return
            seen.add(r)
        yield k
        k += 1


# --------------------------------------------------------------------------
# Lambda: nodes whose forward orbit never meets a zero weight


@dataclass(frozen=True)
class LambdaPart:
    """Lambda restricted to one component.

    finite:         ``nodes`` is the explicit subset
    forward_ray:    r_i in Lambda iff ``threshold`` is not None and i >= threshold
    bi_ray:         every node iff ``everything``
    tails:          t_j in Lambda iff the anchor is in Lambda and j <= ``limit``
    cycle_family:   member k in Lambda iff l_k <= ``limit``
    (``limit`` None means unlimited)
    """

    component: str
    kind: str
    nodes: frozenset = frozenset()
    threshold: Optional[int] = None
    everything: bool = False
    limit: Optional[int] = 0


@dataclass(frozen=True)
class LambdaDescription:
    presentation: Presentation
    parts: dict

    def contains(self, a: NodeAddress) -> bool:
        c = check_address(self.presentation, a)
        part = self.parts[c.id]
        if isinstance(c, Finite):
            return a.position in part.nodes
        if isinstance(c, ForwardRay):
            return part.threshold is not None and a.position >= part.threshold
        if isinstance(c, BiRay):
            return part.everything
        if isinstance(c, CycleFamily):
            return part.limit is None or c.lengths.length(a.member) <= part.limit
        if isinstance(c, BackwardTail):
            return part.limit is None or a.position <= part.limit
        anchor = NodeAddress(c.target_component, a.member, a.position)
        return (part.limit is None or a.depth <= part.limit) and self.contains(anchor)

    def _part_nonempty(self, c) -> bool:
        part = self.parts[c.id]
        if isinstance(c, Finite):
            return bool(part.nodes)
        if isinstance(c, ForwardRay):
            return part.threshold is not None
        if isinstance(c, BiRay):
            return part.everything
        if isinstance(c, CycleFamily):
            return part.limit is None or c.lengths.length(1) <= part.limit
        if part.limit is not None and part.limit < 1:
            return False
        if isinstance(c, BackwardTail):
            return True
        return self._part_nonempty(self.presentation.component(c.target_component))

    def is_empty(self) -> bool:
        return not any(self._part_nonempty(c) for c in self.presentation.components)


def _finite_lambda(c: Finite) -> frozenset:
    n = len(c.map)
    keep = set()
    for i in range(n):
        j, ok = i, True
        for _ in range(n + 1):
            if not c.weights[j]:
                ok = False
                break
            j = c.map[j]
        if ok:
            keep.add(i)
    return frozenset(keep)


def compute_lambda(P: Presentation) -> LambdaDescription:
    parts = {}
    for c in P.components:
        if isinstance(c, Finite):
            parts[c.id] = LambdaPart(c.id, c.kind, nodes=_finite_lambda(c))
        elif isinstance(c, ForwardRay):
            w = c.weights
            if w.block_has_zero:
                th = None
            else:
                pz = w.prefix_zeros()
                th = pz[-1] + 1 if pz else 0
            parts[c.id] = LambdaPart(c.id, c.kind, threshold=th)
        elif isinstance(c, BiRay):
            parts[c.id] = LambdaPart(c.id, c.kind, everything=all(c.block))
        elif isinstance(c, CycleFamily):
            parts[c.id] = LambdaPart(c.id, c.kind, limit=c.weights.first_zero())
    desc = LambdaDescription(P, parts)
    for c in P.components:
        if isinstance(c, BackwardTail):
            anchor_in = desc.contains(NodeAddress(*c.target))
            parts[c.id] = LambdaPart(c.id, c.kind, limit=c.weights.first_zero() if anchor_in else 0)
        elif isinstance(c, TailFamily):
            parts[c.id] = LambdaPart(c.id, c.kind, limit=c.weights.first_zero())
    return desc


# --------------------------------------------------------------------------
# finite fibre: S = Gamma \ phi(Gamma \ Z) must be finite


@dataclass(frozen=True)
class FibreGap:
    """The set S of nodes without a preimage of nonzero weight.

    ``nodes`` lists S explicitly when it is finite; otherwise
    ``infinite_in`` names the components contributing infinitely many nodes.
    """

    finite: bool
    nodes: tuple
    infinite_in: tuple


def _covered_all(P: Presentation, cid: str) -> bool:
    return any(f.weights.at(0) for f in P.families_on(cid))


def _covered(P: Presentation, a: NodeAddress) -> bool:
    return any(t.weights.at(0) for t in P.tails_at(a))


def fibre_gap(P: Presentation, use_weights: bool = True) -> FibreGap:
    P = _view(P, use_weights)
    nodes, infinite = [], []
    for c in P.components:
        if isinstance(c, (Finite, ForwardRay, BiRay, CycleFamily)) and _covered_all(P, c.id):
            continue
        if isinstance(c, Finite):
            hit = set()
            for j, i in enumerate(c.map):
                if c.weights[j]:
                    hit.add(i)
            for i in range(len(c.map)):
                a = NodeAddress(c.id, 1, i)
                if i not in hit and not _covered(P, a):
                    nodes.append(a)
        elif isinstance(c, ForwardRay):
            w = c.weights
            if w.block_has_zero:
                infinite.append(c.id)
                continue
            for pos in [0] + [z + 1 for z in w.prefix_zeros()]:
                a = NodeAddress(c.id, 1, pos)
                if not _covered(P, a):
                    nodes.append(a)
        elif isinstance(c, BiRay):
            if not all(c.block):
                infinite.append(c.id)
        elif isinstance(c, CycleFamily):
            fz = c.weights.first_zero()
            if fz is not None and (not c.lengths.bounded or c.lengths.length(1) > fz):
                infinite.append(c.id)
        elif isinstance(c, BackwardTail):
            w = c.weights
            if w.block_has_zero:
                infinite.append(c.id)
            else:
                nodes.extend(NodeAddress(c.id, 1, j) for j in w.prefix_zeros() if j >= 1)
        else:
            w = c.weights
            deep = [j for j in w.prefix_zeros() if j >= 1]
            target = P.component(c.target_component)
            if w.block_has_zero or (deep and not isinstance(target, Finite)):
                infinite.append(c.id)
            else:
                for i in range(len(target.map) if deep else 0):
                    nodes.extend(NodeAddress(c.id, 1, i, j) for j in deep)
    if infinite:
        return FibreGap(False, (), tuple(infinite))
    return FibreGap(True, tuple(sorted(nodes)), ())


def is_finite_fibre(P: Presentation, use_weights: bool = True) -> tuple:
    gap = fibre_gap(P, use_weights)
    return gap.finite, gap


def finite_fibre(P: Presentation, use_weights: bool = True) -> bool:
    return fibre_gap(P, use_weights).finite


# --------------------------------------------------------------------------
# tau: longest injective segment with nonzero weights


@dataclass(frozen=True)
class TauSup:
    bound: Optional[int]

    @property
    def bounded(self) -> bool:
        return self.bound is not None

    def to_json(self):
        return self.bound if self.bounded else "Unbounded"

    def __str__(self):
        return f"Bounded({self.bound})" if self.bounded else "Unbounded"


UNBOUNDED = TauSup(None)


def _unbounded_sources(P: Presentation) -> list:
    out = []
    for c in P.components:
        if isinstance(c, BiRay):
            if all(c.block):
                out.append(c.id)
        elif isinstance(c, (ForwardRay, BackwardTail, TailFamily)):
            if not c.weights.block_has_zero:
                out.append(c.id)
        elif isinstance(c, CycleFamily):
            if not c.lengths.bounded and not c.weights.block_has_zero:
                out.append(c.id)
    return out


def _run_from(P: Presentation, a: NodeAddress) -> int:
    """Nodes on the longest injective nonzero segment starting at ``a``.

    Only called when every unbounded direction has zeros, so the walk is short.
    """
    c = P.component(a.component)
    if isinstance(c, CycleFamily):
        ell = c.lengths.length(a.member)
        fz = c.weights.first_zero()
        if fz is None or ell <= fz:
            return ell
    seen = set()
    n = 0
    while a not in seen and eval_weight(P, a):
        seen.add(a)
        n += 1
        a = eval_phi(P, a)
    return n


def _component_max_run(P: Presentation, c) -> int:
    if isinstance(c, Finite):
        return max(_run_from(P, NodeAddress(c.id, 1, i)) for i in range(len(c.map)))
    if isinstance(c, ForwardRay):
        return _linear_max_run(c.weights)
    if isinstance(c, BiRay):
        return _max_run(c.block + c.block)
    if isinstance(c, CycleFamily):
        return max(_cyclic_max_run(c.weights, c.lengths.length(k)) for k in _family_members(c))
    raise TypeError(c.kind)


def tau_sup(P: Presentation, use_weights: bool = True) -> TauSup:
    """sup{n : (n, a) in T}, or UNBOUNDED."""
    P = _view(P, use_weights)
    if _unbounded_sources(P):
        return UNBOUNDED
    base = {}
    best = 0
    for c in P.components:
        if not isinstance(c, (BackwardTail, TailFamily)):
            base[c.id] = _component_max_run(P, c)
            best = max(best, base[c.id])
    for c in P.components:
        if isinstance(c, BackwardTail):
            crossing = _run_from(P, NodeAddress(*c.target))
        elif isinstance(c, TailFamily):
            crossing = base[c.target_component]
        else:
            continue
        fz = c.weights.first_zero()
        best = max(best, _linear_max_run(c.weights), fz + crossing if fz else 0)
    return TauSup(max(best - 1, 0))


def horizon(P: Presentation) -> int:
    """A radius past which no injective nonzero segment can still be growing."""
    finite_part = 0
    gap = 0
    for c in P.components:
        if isinstance(c, Finite):
            finite_part += len(c.map)
        elif isinstance(c, BiRay):
            gap = max(gap, len(c.block))
        else:
            finite_part += len(c.weights.prefix)
            gap = max(gap, len(c.weights.block))
            if isinstance(c, CycleFamily) and c.lengths.bounded:
                finite_part += c.lengths.length(1)
    return finite_part + (len(P.components) + 1) * (gap + 1)


# --------------------------------------------------------------------------
# entropy classes


def ent_set_class(P: Presentation, use_weights: bool = True) -> EntClass:
    return EntClass.ZERO if tau_sup(P, use_weights).bounded else EntClass.INFINITE


def is_quasi_periodic(P: Presentation, a: NodeAddress) -> bool:
    """Structural verdict: the forward orbit of ``a`` is finite."""
    c = check_address(P, a)
    if isinstance(c, (ForwardRay, BiRay)):
        return False
    if isinstance(c, BackwardTail):
        return is_quasi_periodic(P, NodeAddress(*c.target))
    if isinstance(c, TailFamily):
        return not isinstance(P.component(c.target_component), (ForwardRay, BiRay))
    return True


@dataclass(frozen=True)
class CsetReason:
    """Why ent_cset is infinite: components carrying non-quasi-periodic Lambda
    points, and cycle families with unbounded periods inside Lambda."""

    escaping: tuple
    unbounded_periods: tuple


def cset_reason(P: Presentation, use_weights: bool = True) -> CsetReason:
    P = _view(P, use_weights)
    lam = compute_lambda(P)
    escaping, periods = [], []
    for c in P.components:
        part = lam.parts[c.id]
        if isinstance(c, ForwardRay) and part.threshold is not None:
            escaping.append(c.id)
        elif isinstance(c, BiRay) and part.everything:
            escaping.append(c.id)
        elif isinstance(c, CycleFamily) and not c.lengths.bounded and part.limit is None:
            periods.append(c.id)
    return CsetReason(tuple(escaping), tuple(periods))


def ent_cset_class(P: Presentation, use_weights: bool = True) -> EntClass:
    if not finite_fibre(P, use_weights):
        return EntClass.NOT_FINITE_FIBRE
    r = cset_reason(P, use_weights)
    return EntClass.INFINITE if (r.escaping or r.unbounded_periods) else EntClass.ZERO


# --------------------------------------------------------------------------
# predicate vector and the implication table


PREDICATES = ("pi1", "pi2", "pi3", "pi4", "rho1", "rho2", "rho3", "rho4")

IMPLICATIONS = (
    ("i", "pi1", "pi3"),
    ("ii", "pi3", "rho3"),
    ("iii", "pi1", "rho1"),
    ("iv", "pi1", "rho3"),
    ("v", "pi4", "pi2"),
    ("vi", "rho4", "pi4"),
    ("vii", "rho2", "pi2"),
    ("viii", "rho4", "pi2"),
    ("ix", "rho1", "rho3"),
    ("x", "rho4", "rho2"),
    ("xi", "pi3", "pi1"),
    ("xii", "pi2", "pi4"),
    ("xiii", "rho2", "pi4"),
    ("xiv", "pi3", "rho1"),
)

COMPLEMENTS = (("pi1", "pi2"), ("pi3", "pi4"), ("rho1", "rho2"), ("rho3", "rho4"))


@dataclass(frozen=True)
class EntropyReport:
    finite_fibre_weighted: bool
    finite_fibre_unweighted: bool
    ent_set_weighted: EntClass
    ent_set_unweighted: EntClass
    ent_cset_weighted: EntClass
    ent_cset_unweighted: EntClass
    tau_bound: TauSup
    predicates: dict

    def to_json(self) -> dict:
        return {
            "finiteFibreWeighted": self.finite_fibre_weighted,
            "finiteFibreUnweighted": self.finite_fibre_unweighted,
            "entSetWeighted": self.ent_set_weighted.value,
            "entSetUnweighted": self.ent_set_unweighted.value,
            "entCsetWeighted": self.ent_cset_weighted.value,
            "entCsetUnweighted": self.ent_cset_unweighted.value,
            "tauBound": self.tau_bound.to_json(),
            "predicates": dict(self.predicates),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EntropyReport":
        tb = doc["tauBound"]
        return cls(
            doc["finiteFibreWeighted"],
            doc["finiteFibreUnweighted"],
            EntClass(doc["entSetWeighted"]),
            EntClass(doc["entSetUnweighted"]),
            EntClass(doc["entCsetWeighted"]),
            EntClass(doc["entCsetUnweighted"]),
            UNBOUNDED if tb == "Unbounded" else TauSup(tb),
            dict(doc["predicates"]),
        )


def predicate_vector(P: Presentation) -> EntropyReport:
    ffw = finite_fibre(P, True)
    ffu = finite_fibre(P, False)
    tau_w = tau_sup(P, True)
    set_w = EntClass.ZERO if tau_w.bounded else EntClass.INFINITE
    set_u = ent_set_class(P, False)
    cset_w = ent_cset_class(P, True)
    cset_u = ent_cset_class(P, False)
    if ffw and set_u is EntClass.INFINITE and set_w is EntClass.ZERO:
        raise ConsistencyError("finite fibre weighted shift with ent_set 0 over a shift with ent_set +inf")
    if ffw and not ffu:
        raise ConsistencyError("weighted shift finite fibre but plain shift is not")
    preds = {
        "pi1": set_u is EntClass.ZERO,
        "pi2": set_u is EntClass.INFINITE,
        "pi3": set_w is EntClass.ZERO,
        "pi4": set_w is EntClass.INFINITE,
        "rho1": cset_u is EntClass.ZERO,
        "rho2": cset_u is EntClass.INFINITE,
        "rho3": cset_w is EntClass.ZERO,
        "rho4": cset_w is EntClass.INFINITE,
    }
    return EntropyReport(ffw, ffu, set_w, set_u, cset_w, cset_u, tau_w, preds)


def implication_check(r: EntropyReport) -> list:
    """Labels of the implications i..xiv that ``r`` violates."""
    if not r.finite_fibre_weighted:
        raise HypothesisNotMet("the implication table assumes a finite fibre weighted shift")
    p = r.predicates
    return [label for label, a, b in IMPLICATIONS if p[a] and not p[b]]
