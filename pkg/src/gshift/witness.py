"""Explicit finite evidence for analyzer verdicts, found by walking the map.

Everything here uses only ``eval_phi``, ``eval_weight`` and ``preimages``;
none of it consults the analyzer's structural rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .presentation import (
    CycleFamily,
    Finite,
    NodeAddress,
    Presentation,
    eval_phi,
    eval_weight,
    iter_nodes,
    preimages,
)

DEFAULT_TARGET_N = 50
DEFAULT_RADIUS = 200
DEFAULT_KMAX = 8


@dataclass(frozen=True)
class TauWitness:
    n: int
    start: NodeAddress
    nodes: tuple
    weights: tuple

    def revalidate(self, P: Presentation) -> bool:
        if len(self.nodes) != self.n + 1 or self.nodes[0] != self.start:
            return False
        if len(set(self.nodes)) != len(self.nodes):
            return False
        for i, a in enumerate(self.nodes):
            w = eval_weight(P, a)
            if not w or w != self.weights[i]:
                return False
            if i + 1 < len(self.nodes) and eval_phi(P, a) != self.nodes[i + 1]:
                return False
        return True


def _segment(P: Presentation, start: NodeAddress, n: int) -> Optional[TauWitness]:
    w = eval_weight(P, start)
    if not w:
        return None
    nodes, weights, seen = [start], [w], {start}
    a = start
    for _ in range(n):
        a = eval_phi(P, a)
        if a in seen:
            return None
        w = eval_weight(P, a)
        if not w:
            return None
        seen.add(a)
        nodes.append(a)
        weights.append(w)
    return TauWitness(n, start, tuple(nodes), tuple(weights))


def tau_witness_search(P: Presentation, use_weights: bool = True, target_n: int = DEFAULT_TARGET_N,
                       radius: int = DEFAULT_RADIUS) -> Optional[TauWitness]:
    """First start in the radius cover carrying a segment of length ``target_n``; None if none."""
    if target_n < 0:
        raise ValueError("target_n must be >= 0")
    if radius < target_n:
        raise ValueError("radius must be >= target_n")
    if not use_weights:
        P = P.unweighted()
    for a in iter_nodes(P, radius):
        wit = _segment(P, a, target_n)
        if wit is not None:
            return wit
    return None


class PeriodEntry(NamedTuple):
    component: str
    member: int
    length: int
    in_lambda: bool


def _walk_cycle(P: Presentation, start: NodeAddress, limit: int) -> list:
    nodes = [start]
    a = eval_phi(P, start)
    while a != start:
        if len(nodes) > limit:
            raise RuntimeError(f"{start} did not return within {limit} steps")
        nodes.append(a)
        a = eval_phi(P, a)
    return nodes


def _orbit_nonzero(P: Presentation, a: NodeAddress, steps: int) -> bool:
    for _ in range(steps):
        if not eval_weight(P, a):
            return False
        a = eval_phi(P, a)
    return True


def period_spectrum_scan(P: Presentation, k_max: int = DEFAULT_KMAX) -> list:
    """Cycle lengths and Lambda membership for family members k <= k_max and finite cycles."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    out = []
    for c in P.components:
        if isinstance(c, CycleFamily):
            for k in range(1, k_max + 1):
                start = NodeAddress(c.id, k, 0)
                cyc = _walk_cycle(P, start, c.lengths.length(k))
                ell = len(cyc)
                # all nodes of a cycle share one orbit, so a double lap covers
                # every node's orbit prefix of length 2*ell
                out.append(PeriodEntry(c.id, k, ell, _orbit_nonzero(P, start, 2 * ell)))
        elif isinstance(c, Finite):
            done = set()
            for i in range(len(c.map)):
                a = NodeAddress(c.id, 1, i)
                for _ in range(len(c.map)):
                    a = eval_phi(P, a)
                if a.position in done:
                    continue
                cyc = _walk_cycle(P, a, len(c.map))
                done.update(x.position for x in cyc)
                first = min(cyc)
                out.append(PeriodEntry(c.id, first.position, len(cyc),
                                       _orbit_nonzero(P, first, 2 * len(cyc))))
    return out


@dataclass(frozen=True)
class InjectivePrefix:
    steps: int


@dataclass(frozen=True)
class CycleDetected:
    period: int
    preperiod: int


def nonqp_witness(P: Presentation, a: NodeAddress, steps: int) -> Union[InjectivePrefix, CycleDetected]:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    seen = {a: 0}
    for t in range(1, steps + 1):
        a = eval_phi(P, a)
        if a in seen:
            return CycleDetected(t - seen[a], seen[a])
        seen[a] = t
    return InjectivePrefix(steps)


def in_fibre_gap(P: Presentation, a: NodeAddress) -> bool:
    """``a`` has no preimage of nonzero weight."""
    return not any(eval_weight(P, b) for b in preimages(P, a))


def fibre_gap_scan(P: Presentation, use_weights: bool = True, count: int = 5,
                   radius: int = DEFAULT_RADIUS) -> list:
    """Up to ``count`` nodes of S = Gamma minus phi(Gamma minus Z), scanning the radius cover."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if not use_weights:
        P = P.unweighted()
    hits = []
    for a in iter_nodes(P, radius):
        if in_fibre_gap(P, a):
            hits.append(a)
            if len(hits) >= count:
                break
    return hits
