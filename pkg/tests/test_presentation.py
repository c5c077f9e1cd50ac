import pytest
from hypothesis import given, settings, strategies as st

from gshift.field import FieldSpec
from gshift.generate import random_presentation
from gshift.presentation import (
    AddressOutOfRange,
    BackwardTail,
    BiRay,
    CycleFamily,
    EventuallyPeriodicWord,
    Finite,
    ForwardRay,
    InvalidPresentation,
    LengthSpec,
    NodeAddress as N,
    Presentation,
    TailFamily,
    enumerate_nodes,
    eval_phi,
    eval_weight,
    iter_nodes,
    preimages,
    require_valid,
    validate,
    zero_set_summary,
)

F2, F3 = FieldSpec(2), FieldSpec(3)


def word(F, block, prefix=()):
    return EventuallyPeriodicWord([F(v) for v in prefix], [F(v) for v in block])


def codes(P):
    return sorted(v.code for v in validate(P))


def test_word_access():
    w = word(F3, [1, 0], prefix=[2])
    assert [x.value for x in w.expand(6)] == [2, 1, 0, 1, 0, 1]
    assert w.first_zero() == 2
    assert w.block_has_zero and not w.is_zero_free
    assert word(F3, [1, 2], prefix=[0]).first_zero() == 0
    assert word(F3, [1]).first_zero() is None


def test_length_specs():
    assert [LengthSpec.geometric(2, 1).length(k) for k in (1, 2, 3)] == [2, 4, 8]
    assert [LengthSpec.linear(2, 1).length(k) for k in (1, 2, 3)] == [3, 5, 7]
    assert LengthSpec.constant(3).bounded and not LengthSpec.linear(1, 0).bounded
    assert LengthSpec.geometric(1, 1).problems()
    assert LengthSpec.linear(1, -1).problems()
    with pytest.raises(ValueError):
        LengthSpec.constant(2).length(0)


@pytest.mark.parametrize("comps,code", [
    ([], "NoComponents"),
    ([Finite("a", [0], [F2(1)]), Finite("a", [0], [F2(1)])], "DuplicateId"),
    ([Finite("a", [0], [F3(1)])], "FieldMismatch"),
    ([Finite("a", [], [])], "EmptyFinite"),
    ([Finite("a", [0, 0], [F2(1)])], "WeightCountMismatch"),
    ([Finite("a", [0, 2], [F2(1), F2(1)])], "MapOutOfRange"),
    ([BiRay("z", [])], "EmptyBlock"),
    ([CycleFamily("c", LengthSpec.constant(0), word(F2, [1]))], "BadLength"),
    ([TailFamily("t", "nope", word(F2, [1]))], "UnknownTarget"),
    ([ForwardRay("r", word(F2, [1])), BackwardTail("t", N("r", 1, 0), word(F2, [1])),
      BackwardTail("u", N("t", 1, 1), word(F2, [1]))], "BadAttachmentKind"),
    ([Finite("a", [0], [F2(1)]), BackwardTail("t", N("a", 1, 3), word(F2, [1]))], "TargetOutOfRange"),
    ([CycleFamily("c", LengthSpec.constant(2), word(F2, [1])),
      BackwardTail("t", N("c", 1, 2), word(F2, [1]))], "TargetOutOfRange"),
])
def test_each_violation_is_reported(comps, code):
    P = Presentation(F2, comps)
    assert code in codes(P)
    with pytest.raises(InvalidPresentation):
        require_valid(P)


def test_gallery_style_presentation_has_no_violations():
    P = Presentation(F2, [ForwardRay("odd", word(F2, [1])),
                          BackwardTail("even", N("odd", 1, 0), word(F2, [1]))])
    assert validate(P) == []


def test_eval_on_every_kind():
    P = require_valid(Presentation(F3, [
        Finite("a", [1, 1], [F3(2), F3(0)]),
        ForwardRay("r", word(F3, [1, 0], prefix=[2])),
        BiRay("z", [F3(0), F3(1)]),
        BackwardTail("t", N("r", 1, 2), word(F3, [2])),
        CycleFamily("c", LengthSpec.linear(1, 1), word(F3, [1], prefix=[2])),
        TailFamily("f", "a", word(F3, [0, 1])),
    ]))
    assert eval_phi(P, N("a", 1, 0)) == N("a", 1, 1)
    assert eval_weight(P, N("a", 1, 1)).value == 0
    assert eval_phi(P, N("r", 1, 5)) == N("r", 1, 6)
    assert eval_weight(P, N("r", 1, 0)).value == 2
    assert eval_weight(P, N("r", 1, 2)).value == 0
    assert eval_phi(P, N("z", 1, -3)) == N("z", 1, -2)
    assert eval_weight(P, N("z", 1, -3)).value == 1
    assert eval_phi(P, N("t", 1, 1)) == N("r", 1, 2)
    assert eval_phi(P, N("t", 1, 4)) == N("t", 1, 3)
    assert eval_phi(P, N("c", 2, 2)) == N("c", 2, 0)
    assert eval_weight(P, N("c", 3, 0)).value == 2
    assert eval_phi(P, N("f", 1, 1, 1)) == N("a", 1, 1)
    assert eval_phi(P, N("f", 1, 1, 3)) == N("f", 1, 1, 2)
    assert eval_weight(P, N("f", 1, 1, 1)).value == 0
    for bad in (N("a", 1, 2), N("r", 1, -1), N("t", 1, 0), N("c", 1, 2), N("c", 0, 0), N("f", 1, 0, 0)):
        with pytest.raises(AddressOutOfRange):
            eval_phi(P, bad)


def test_preimages_include_attached_tails():
    P = require_valid(Presentation(F2, [
        CycleFamily("c", LengthSpec.constant(2), word(F2, [1])),
        BackwardTail("t", N("c", 1, 0), word(F2, [1])),
        TailFamily("f", "c", word(F2, [1])),
    ]))
    assert set(preimages(P, N("c", 1, 0))) == {N("c", 1, 1), N("t", 1, 1), N("f", 1, 0, 1)}
    assert preimages(P, N("c", 4, 1)) == [N("c", 4, 0), N("f", 4, 1, 1)]


def test_radius_cover_grows_and_has_no_repeats():
    P = random_presentation(7, 5)
    small, big = enumerate_nodes(P, 3), enumerate_nodes(P, 6)
    assert len(set(big)) == len(big)
    assert set(small) <= set(big)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_preimages_invert_phi(seed):
    P = random_presentation(seed, 4)
    for a in iter_nodes(P, 4):
        assert a in preimages(P, eval_phi(P, a))
        for b in preimages(P, a):
            assert eval_phi(P, b) == a


def test_zero_set_summary():
    P = require_valid(Presentation(F2, [
        Finite("a", [0, 0], [F2(1), F2(0)]),
        ForwardRay("r", word(F2, [1], prefix=[0])),
        CycleFamily("small", LengthSpec.constant(2), word(F2, [1, 1, 0])),
        CycleFamily("grow", LengthSpec.linear(1, 0), word(F2, [1, 1, 0])),
    ]))
    z = zero_set_summary(P)
    assert not z.zero_set_empty
    assert z.for_component("a").explicit == (1,)
    assert not z.for_component("small").infinite
    assert z.for_component("grow").infinite
    assert not z.zero_set_finite
    assert zero_set_summary(Presentation(F2, [BiRay("z", [F2(1)])])).zero_set_empty
