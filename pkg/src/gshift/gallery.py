"""Named presentations with their known classifications.

Each entry carries the fragment of the classification report it must
reproduce.  The canonical JSON form of every entry is bundled under
``gallery_data/`` and must stay byte-identical to ``serialize.dumps``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

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

ZERO, INF, NFF = "Zero", "Infinite", "NotFiniteFibre"


class UnknownEntry(KeyError):
    pass


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    description: str
    build: Callable[[], Presentation]
    expected: dict = field(default_factory=dict)

    @property
    def presentation(self) -> Presentation:
        return require_valid(self.build())


def _word(F: FieldSpec, block, prefix=()) -> EventuallyPeriodicWord:
    return EventuallyPeriodicWord([F(v) for v in prefix], [F(v) for v in block])


def _rest(F: FieldSpec) -> CycleFamily:
    # infinitely many further fixed points of weight 1
    return CycleFamily("rest", LengthSpec.constant(1), _word(F, [1]))


def counterexample_3_4() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [BiRay("z", [F(0), F(1)])])


def _theta1(v: int) -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [
        CycleFamily("cycles", LengthSpec.geometric(2, 1), _word(F, [v])),
        Finite("fixed", [0], [F(v)]),
        TailFamily("rows", "cycles", _word(F, [1])),
        BackwardTail("row_fixed", NodeAddress("fixed", 1, 0), _word(F, [1])),
        _rest(F),
    ])


def theta1_u() -> Presentation:
    return _theta1(1)


def theta1_v() -> Presentation:
    return _theta1(0)


def theta2() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [
        Finite("fixed", [0], [F(1)]),
        BackwardTail("row", NodeAddress("fixed", 1, 0), _word(F, [1])),
        _rest(F),
    ])


def theta3() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [
        ForwardRay("odd", _word(F, [1])),
        BackwardTail("even", NodeAddress("odd", 1, 0), _word(F, [1])),
        _rest(F),
    ])


def badr5000() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [ForwardRay("theta", _word(F, [1, 0])), _rest(F)])


def id_psi() -> Presentation:
    return Presentation(FieldSpec(2), [_rest(FieldSpec(2))])


def full_shift() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [BiRay("z", [F(1)])])


def finite_demo_collapse() -> Presentation:
    F = FieldSpec(2)
    return Presentation(F, [Finite("a", [0, 0, 0], [F(1)] * 3)])


def finite_demo_swap() -> Presentation:
    F = FieldSpec(3)
    return Presentation(F, [Finite("a", [1, 0], [F(1), F(1)])])


def finite_demo_mixed() -> Presentation:
    F = FieldSpec(5)
    return Presentation(F, [
        Finite("a", [1, 2, 0, 2], [F(2), F(3), F(1), F(4)]),
        Finite("b", [1, 1], [F(0), F(1)]),
    ])


def _all(ff_w, ff_u, set_w, set_u, cset_w, cset_u) -> dict:
    return {
        "finiteFibreWeighted": ff_w,
        "finiteFibreUnweighted": ff_u,
        "entSetWeighted": set_w,
        "entSetUnweighted": set_u,
        "entCsetWeighted": cset_w,
        "entCsetUnweighted": cset_u,
    }


ENTRIES = {e.name: e for e in [
    GalleryEntry("counterexample_3_4",
                 "integers, n -> n+1, weight 0 on evens: plain shift finite fibre, weighted not",
                 counterexample_3_4, _all(False, True, ZERO, INF, NFF, INF)),
    GalleryEntry("theta1_u",
                 "cycles of length 2^k with infinite tails at every node, all weights 1",
                 theta1_u, _all(True, True, INF, INF, INF, INF)),
    GalleryEntry("theta1_v",
                 "the same map with weight 0 on the first row",
                 theta1_v, _all(True, True, INF, INF, ZERO, INF)),
    GalleryEntry("theta2",
                 "a backward tail collapsing onto a fixed point",
                 theta2, _all(True, True, INF, INF, ZERO, ZERO)),
    GalleryEntry("theta3",
                 "odd indices drift forward, even indices collapse back onto the start",
                 theta3, _all(True, True, INF, INF, INF, INF)),
    GalleryEntry("badr5000",
                 "a forward ray with weight 0 at every second node, all else fixed",
                 badr5000, {"finiteFibreWeighted": False, "finiteFibreUnweighted": True,
                            "entSetWeighted": ZERO, "entSetUnweighted": INF,
                            "entCsetWeighted": NFF, "entCsetUnweighted": INF, "tauBound": 0}),
    GalleryEntry("id_psi", "identity on an infinite set, all weights 1",
                 id_psi, {**_all(True, True, ZERO, ZERO, ZERO, ZERO), "tauBound": 0}),
    GalleryEntry("full_shift", "the two-sided shift on the integers, all weights 1",
                 full_shift, _all(True, True, INF, INF, INF, INF)),
    GalleryEntry("finite_demo_collapse", "GF(2), three indices all mapped to index 0",
                 finite_demo_collapse, {**_all(True, True, ZERO, ZERO, ZERO, ZERO), "tauBound": 1}),
    GalleryEntry("finite_demo_swap", "GF(3), a weight-one swap of two indices",
                 finite_demo_swap, {**_all(True, True, ZERO, ZERO, ZERO, ZERO), "tauBound": 1}),
    GalleryEntry("finite_demo_mixed", "GF(5), a 3-cycle with a hanging index and a dying pair",
                 finite_demo_mixed, {**_all(True, True, ZERO, ZERO, ZERO, ZERO), "tauBound": 3}),
]}


def names() -> list:
    return list(ENTRIES)


def get(name: str) -> GalleryEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnknownEntry(name) from None


def bundled_text(name: str) -> str:
    get(name)
    return resources.files("gshift").joinpath("gallery_data", f"{name}.json").read_text(encoding="utf-8")


def mismatches(name: str, report_json: dict) -> dict:
    """Keys where ``report_json`` differs from the entry's expected fragment: key -> (expected, got)."""
    exp = get(name).expected
    return {k: (v, report_json.get(k)) for k, v in exp.items() if report_json.get(k) != v}
