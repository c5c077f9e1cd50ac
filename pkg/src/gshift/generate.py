"""Seeded random presentations for property checks and the implication table."""

from __future__ import annotations

import random

from .analyzer import finite_fibre
from .field import FieldSpec
from .presentation import (
    BackwardTail,
    BiRay,
    CycleFamily,
    EventuallyPeriodicWord,
    Finite,
    ForwardRay,
    LengthSpec,
    NodeAddress,
    Presentation,
    TailFamily,
    require_valid,
)

PRIMES = (2, 3, 5)
BASE_KINDS = ("finite", "forward_ray", "bi_ray", "cycle_family")


def _letter(rng: random.Random, F: FieldSpec, zero_rate: float):
    if rng.random() < zero_rate:
        return F.zero
    return F(rng.randrange(1, F.p))


def _word(rng: random.Random, F: FieldSpec) -> EventuallyPeriodicWord:
    # a zero-free repeating block keeps a reasonable share of instances finite fibre
    block_zero_rate = 0.0 if rng.random() < 0.6 else 0.4
    prefix = [_letter(rng, F, 0.3) for _ in range(rng.randrange(3))]
    block = [_letter(rng, F, block_zero_rate) for _ in range(rng.randint(1, 3))]
    return EventuallyPeriodicWord(prefix, block)


def _lengths(rng: random.Random) -> LengthSpec:
    r = rng.random()
    if r < 0.4:
        return LengthSpec.constant(rng.randint(1, 4))
    if r < 0.8:
        return LengthSpec.linear(rng.randint(1, 2), rng.randint(0, 2))
    return LengthSpec.geometric(2, rng.randint(1, 2))


def _base(rng: random.Random, F: FieldSpec, cid: str, kind: str):
    if kind == "finite":
        n = rng.randint(1, 5)
        return Finite(cid, [rng.randrange(n) for _ in range(n)], [_letter(rng, F, 0.2) for _ in range(n)])
    if kind == "forward_ray":
        return ForwardRay(cid, _word(rng, F))
    if kind == "bi_ray":
        rate = 0.0 if rng.random() < 0.6 else 0.4
        return BiRay(cid, [_letter(rng, F, rate) for _ in range(rng.randint(1, 3))])
    return CycleFamily(cid, _lengths(rng), _word(rng, F))


def _anchor(rng: random.Random, c) -> NodeAddress:
    if isinstance(c, Finite):
        return NodeAddress(c.id, 1, rng.randrange(len(c.map)))
    if isinstance(c, ForwardRay):
        return NodeAddress(c.id, 1, rng.randrange(4))
    if isinstance(c, BiRay):
        return NodeAddress(c.id, 1, rng.randint(-3, 3))
    k = rng.randint(1, 3)
    return NodeAddress(c.id, k, rng.randrange(c.lengths.length(k)))


def random_presentation(seed: int, size_budget: int = 4) -> Presentation:
    """Deterministic in ``seed``; at most ``size_budget`` components; always valid."""
    if size_budget < 1:
        raise ValueError("size_budget must be >= 1")
    rng = random.Random(seed)
    F = FieldSpec(rng.choice(PRIMES))
    n_base = rng.randint(1, max(1, (size_budget + 1) // 2))
    comps = [_base(rng, F, f"c{i}", rng.choice(BASE_KINDS)) for i in range(n_base)]
    bases = list(comps)
    for i in range(rng.randint(0, size_budget - n_base)):
        target = rng.choice(bases)
        if rng.random() < 0.5:
            comps.append(BackwardTail(f"t{i}", _anchor(rng, target), _word(rng, F)))
        else:
            comps.append(TailFamily(f"t{i}", target.id, _word(rng, F)))
    return require_valid(Presentation(F, comps))


def random_finite_fibre(seed: int, size_budget: int = 4, max_tries: int = 1000) -> tuple:
    """(draw seed, presentation) for the first finite fibre draw in seed's own range.

    Draw seeds are ``seed * max_tries + attempt``, so distinct seeds never share draws.
    """
    for attempt in range(max_tries):
        s = seed * max_tries + attempt
        P = random_presentation(s, size_budget)
        if finite_fibre(P, True):
            return s, P
    raise RuntimeError(f"no finite fibre presentation within {max_tries} draws from seed {seed}")
