"""Presentation <-> JSON.

Weights are written as plain integers and reduced mod p on load.  Unknown
keys anywhere in the document are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .field import FieldSpec, FieldError
from .presentation import (
    BackwardTail,
    BiRay,
    CycleFamily,
    EventuallyPeriodicWord,
    Finite,
    ForwardRay,
    InvalidPresentation,
    LengthSpec,
    NodeAddress,
    Presentation,
    PresentationError,
    TailFamily,
    Violation,
    require_valid,
)


class PresentationFormatError(PresentationError):
    pass


_COMPONENT_KEYS = {
    "finite": {"id", "kind", "map", "weights"},
    "forward_ray": {"id", "kind", "weights"},
    "bi_ray": {"id", "kind", "block"},
    "backward_tail": {"id", "kind", "target", "weights"},
    "cycle_family": {"id", "kind", "lengths", "weights"},
    "tail_family": {"id", "kind", "target_component", "weights"},
}

_LENGTH_KEYS = {
    "constant": ("value",),
    "linear": ("a", "b"),
    "geometric": ("base", "b"),
}


def _keys(obj: Any, allowed: set, required: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise PresentationFormatError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise PresentationFormatError(f"{where}: unknown keys {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise PresentationFormatError(f"{where}: missing keys {sorted(missing)}")
    return obj


def _int(x: Any, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise PresentationFormatError(f"{where}: expected an integer, got {x!r}")
    return x


def _ints(xs: Any, where: str) -> list:
    if not isinstance(xs, list):
        raise PresentationFormatError(f"{where}: expected a list")
    return [_int(x, where) for x in xs]


def _word(obj: Any, F: FieldSpec, where: str) -> EventuallyPeriodicWord:
    _keys(obj, {"prefix", "block"}, {"block"}, where)
    prefix = _ints(obj.get("prefix", []), where + ".prefix")
    block = _ints(obj["block"], where + ".block")
    return EventuallyPeriodicWord([F(v) for v in prefix], [F(v) for v in block])


def _lengths(obj: Any, where: str) -> LengthSpec:
    if not isinstance(obj, dict) or obj.get("kind") not in _LENGTH_KEYS:
        raise PresentationFormatError(f"{where}: kind must be one of {sorted(_LENGTH_KEYS)}")
    names = _LENGTH_KEYS[obj["kind"]]
    _keys(obj, {"kind", *names}, {"kind", *names}, where)
    vals = [_int(obj[n], f"{where}.{n}") for n in names]
    if obj["kind"] == "constant":
        return LengthSpec.constant(vals[0])
    if obj["kind"] == "linear":
        return LengthSpec.linear(*vals)
    return LengthSpec.geometric(*vals)


def _address(obj: Any, where: str) -> NodeAddress:
    _keys(obj, {"component", "member", "position"}, {"component", "position"}, where)
    if not isinstance(obj["component"], str):
        raise PresentationFormatError(f"{where}.component: expected a string")
    return NodeAddress(obj["component"], _int(obj.get("member", 1), where), _int(obj["position"], where))


def from_dict(doc: Any, validate: bool = True) -> Presentation:
    _keys(doc, {"field", "components"}, {"field", "components"}, "document")
    fdoc = _keys(doc["field"], {"p"}, {"p"}, "field")
    try:
        F = FieldSpec(_int(fdoc["p"], "field.p"))
    except FieldError as e:
        raise InvalidPresentation([Violation("NotPrime", None, str(e))]) from None
    comps = doc["components"]
    if not isinstance(comps, list):
        raise PresentationFormatError("components: expected a list")
    out = []
    for idx, c in enumerate(comps):
        where = f"components[{idx}]"
        if not isinstance(c, dict) or c.get("kind") not in _COMPONENT_KEYS:
            raise PresentationFormatError(f"{where}: kind must be one of {sorted(_COMPONENT_KEYS)}")
        allowed = _COMPONENT_KEYS[c["kind"]]
        _keys(c, allowed, allowed, where)
        cid = c["id"]
        if not isinstance(cid, str):
            raise PresentationFormatError(f"{where}.id: expected a string")
        kind = c["kind"]
        if kind == "finite":
            out.append(Finite(cid, _ints(c["map"], where + ".map"),
                              [F(v) for v in _ints(c["weights"], where + ".weights")]))
        elif kind == "forward_ray":
            out.append(ForwardRay(cid, _word(c["weights"], F, where + ".weights")))
        elif kind == "bi_ray":
            out.append(BiRay(cid, [F(v) for v in _ints(c["block"], where + ".block")]))
        elif kind == "backward_tail":
            out.append(BackwardTail(cid, _address(c["target"], where + ".target"),
                                    _word(c["weights"], F, where + ".weights")))
        elif kind == "cycle_family":
            out.append(CycleFamily(cid, _lengths(c["lengths"], where + ".lengths"),
                                   _word(c["weights"], F, where + ".weights")))
        else:
            if not isinstance(c["target_component"], str):
                raise PresentationFormatError(f"{where}.target_component: expected a string")
            out.append(TailFamily(cid, c["target_component"], _word(c["weights"], F, where + ".weights")))
    P = Presentation(F, out)
    return require_valid(P) if validate else P


def _word_doc(w: EventuallyPeriodicWord) -> dict:
    prefix, block = w.values()
    return {"prefix": list(prefix), "block": list(block)}


def to_dict(P: Presentation) -> dict:
    comps = []
    for c in P.components:
        if isinstance(c, Finite):
            d = {"id": c.id, "kind": c.kind, "map": list(c.map), "weights": [x.value for x in c.weights]}
        elif isinstance(c, ForwardRay):
            d = {"id": c.id, "kind": c.kind, "weights": _word_doc(c.weights)}
        elif isinstance(c, BiRay):
            d = {"id": c.id, "kind": c.kind, "block": [x.value for x in c.block]}
        elif isinstance(c, BackwardTail):
            t = c.target
            d = {"id": c.id, "kind": c.kind,
                 "target": {"component": t.component, "member": t.member, "position": t.position},
                 "weights": _word_doc(c.weights)}
        elif isinstance(c, CycleFamily):
            ls = c.lengths
            names = _LENGTH_KEYS[ls.kind]
            vals = (ls.a,) if ls.kind == "constant" else (ls.a, ls.b)
            d = {"id": c.id, "kind": c.kind, "lengths": {"kind": ls.kind, **dict(zip(names, vals))},
                 "weights": _word_doc(c.weights)}
        else:
            d = {"id": c.id, "kind": c.kind, "target_component": c.target_component,
                 "weights": _word_doc(c.weights)}
        comps.append(d)
    return {"field": {"p": P.field.p}, "components": comps}


def dumps(P: Presentation) -> str:
    """Canonical text form: two-space indent, insertion-ordered keys, trailing newline."""
    return json.dumps(to_dict(P), indent=2) + "\n"


def loads(text: str, validate: bool = True) -> Presentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise PresentationFormatError(f"not valid JSON: {e}") from None
    return from_dict(doc, validate=validate)


def load(path: Union[str, Path], validate: bool = True) -> Presentation:
    return loads(Path(path).read_text(encoding="utf-8"), validate=validate)
