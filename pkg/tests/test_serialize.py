import json

import pytest
from hypothesis import given, settings, strategies as st

from gshift import gallery
from gshift.generate import random_presentation
from gshift.presentation import InvalidPresentation
from gshift.serialize import PresentationFormatError, dumps, from_dict, loads, to_dict


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=0, max_value=100_000), st.integers(min_value=1, max_value=6))
def test_round_trip_is_canonical(seed, budget):
    P = random_presentation(seed, budget)
    text = dumps(P)
    assert loads(text) == P
    assert dumps(loads(text)) == text


def test_prefix_is_optional_and_weights_reduce():
    doc = {"field": {"p": 3}, "components": [
        {"id": "r", "kind": "forward_ray", "weights": {"block": [4, -1]}}]}
    P = from_dict(doc)
    assert to_dict(P)["components"][0]["weights"] == {"prefix": [], "block": [1, 2]}


def test_unknown_keys_rejected():
    doc = json.loads(dumps(gallery.get("theta2").presentation))
    doc["components"][0]["colour"] = "red"
    with pytest.raises(PresentationFormatError):
        from_dict(doc)
    doc = json.loads(dumps(gallery.get("theta2").presentation))
    doc["extra"] = 1
    with pytest.raises(PresentationFormatError):
        from_dict(doc)


def test_non_prime_field_is_a_violation():
    with pytest.raises(InvalidPresentation) as e:
        from_dict({"field": {"p": 4}, "components": []})
    assert e.value.violations[0].code == "NotPrime"


@pytest.mark.parametrize("text", ["{", "[]", '{"field": {"p": 2}, "components": [{"kind": "spiral"}]}',
                                  '{"field": {"p": 2}, "components": [{"id": "a", "kind": "finite", '
                                  '"map": [0], "weights": [true]}]}'])
def test_malformed_documents(text):
    with pytest.raises(PresentationFormatError):
        loads(text)


def test_validation_can_be_deferred():
    text = '{"field": {"p": 2}, "components": [{"id": "a", "kind": "finite", "map": [3], "weights": [1]}]}'
    with pytest.raises(InvalidPresentation):
        loads(text)
    assert loads(text, validate=False).components[0].map == (3,)


def test_geometric_lengths_round_trip():
    P = gallery.get("theta1_u").presentation
    doc = to_dict(P)
    assert doc["components"][0]["lengths"] == {"kind": "geometric", "base": 2, "b": 1}
    assert from_dict(doc) == P
