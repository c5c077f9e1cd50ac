"""Arithmetic in the prime field GF(p)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

MAX_CLI_PRIME = 997


class FieldError(ValueError):
    pass


class NotPrime(FieldError):
    pass


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


class SpecMismatch(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError("field modulus must be an int")
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.p)]

    def __str__(self):
        return f"GF({self.p})"


def field_make(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.spec.p:
            raise ValueError(f"{self.value} is not a residue mod {self.spec.p}")

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value + other.value) % self.spec.p, self.spec)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value - other.value) % self.spec.p, self.spec)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return FieldElement((self.value * other.value) % self.spec.p, self.spec)

    def __neg__(self) -> "FieldElement":
        return FieldElement((-self.value) % self.spec.p, self.spec)

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(pow(self.value, k, self.spec.p), self.spec)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroInverse(f"0 has no inverse in {self.spec}")
        return FieldElement(pow(self.value, -1, self.spec.p), self.spec)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF({self.spec.p})"


def arith(op: str, a: FieldElement, b: Optional[FieldElement] = None) -> FieldElement:
    """Dispatch one of add, mul, neg, inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown field operation {op!r}")


def pow_fermat_check(a: FieldElement) -> bool:
    # a^|F| = a is what collapses a |F|-fold repeated cycle product back to one pass.
    return a ** a.spec.p == a


def product(seq: Iterable[FieldElement], spec: Optional[FieldSpec] = None) -> FieldElement:
    """Left-to-right product; the empty product is 1 (``spec`` required then)."""
    acc = None
    for x in seq:
        acc = x if acc is None else acc * x
    if acc is None:
        if spec is None:
            raise ValueError("empty product needs an explicit field")
        return spec.one
    if spec is not None and acc.spec != spec:
        raise SpecMismatch(f"{acc.spec} vs {spec}")
    return acc
