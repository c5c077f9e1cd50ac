"""Entropy classification of weighted generalized shifts over GF(p)."""

from .field import FieldElement, FieldSpec, field_make
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
    TailFamily,
    validate,
)
from .analyzer import EntClass, EntropyReport, predicate_vector, tau_sup
from .serialize import dumps, load, loads

__all__ = [
    "BackwardTail", "BiRay", "CycleFamily", "EntClass", "EntropyReport", "EventuallyPeriodicWord",
    "FieldElement", "FieldSpec", "Finite", "ForwardRay", "InvalidPresentation", "LengthSpec",
    "NodeAddress", "Presentation", "TailFamily", "dumps", "field_make", "load", "loads",
    "predicate_vector", "tau_sup", "validate",
]
