"""Finite descriptions of (possibly infinite) weighted self-maps.

A :class:`Presentation` is a disjoint union of components.  Each component
kind fixes both the shape of the map and how weights are read off an
eventually periodic word:

* ``Finite``         nodes 0..n-1, explicit image table and weights
* ``ForwardRay``     r_0 -> r_1 -> ...; r_i has weight word[i]
* ``BiRay``          ... -> z_{-1} -> z_0 -> z_1 -> ...; z_n has weight block[n mod L]
* ``BackwardTail``   ... -> t_2 -> t_1 -> target; t_j has weight word[j-1]
* ``CycleFamily``    for k >= 1 a cycle of length l_k; c_{k,i} has weight word[i]
* ``TailFamily``     one backward tail hanging off every node of a target component

Nodes are addressed by :class:`NodeAddress`.  For ``BackwardTail`` the
``position`` is the tail depth j >= 1.  For ``TailFamily`` the pair
``(member, position)`` names the node of the target component the tail
hangs from and ``depth`` (>= 1) is the depth inside that tail; ``depth`` is 0
everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence, Union

from .field import FieldElement, FieldSpec


class PresentationError(ValueError):
    pass


class AddressOutOfRange(PresentationError):
    pass


class NodeAddress(NamedTuple):
    component: str
    member: int = 1
    position: int = 0
    depth: int = 0

    def __str__(self):
        s = f"{self.component}[{self.member},{self.position}"
        if self.depth:
            s += f";{self.depth}"
        return s + "]"


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    prefix: tuple
    block: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "block", tuple(self.block))

    def at(self, i: int) -> FieldElement:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.block[(i - len(self.prefix)) % len(self.block)]

    def expand(self, n: int) -> list:
        return [self.at(i) for i in range(n)]

    @property
    def block_has_zero(self) -> bool:
        return any(not x for x in self.block)

    @property
    def is_zero_free(self) -> bool:
        return not self.block_has_zero and all(self.prefix)

    def first_zero(self) -> Optional[int]:
        """Smallest position holding 0, or None if the word never vanishes."""
        for i, x in enumerate(self.prefix):
            if not x:
                return i
        for i, x in enumerate(self.block):
            if not x:
                return len(self.prefix) + i
        return None

    def prefix_zeros(self) -> tuple:
        return tuple(i for i, x in enumerate(self.prefix) if not x)

    def block_zero_offsets(self) -> tuple:
        return tuple(i for i, x in enumerate(self.block) if not x)

    def period_span(self) -> int:
        return len(self.prefix) + len(self.block)

    def values(self) -> tuple:
        return tuple(x.value for x in self.prefix), tuple(x.value for x in self.block)


@dataclass(frozen=True)
class LengthSpec:
    """Cycle lengths l_k for k >= 1.

    ``constant``: l_k = a.  ``linear``: l_k = a*k + b.  ``geometric``: l_k = b * a**k.
    """

    kind: str
    a: int
    b: int = 0

    @classmethod
    def constant(cls, c: int) -> "LengthSpec":
        return cls("constant", c, 0)

    @classmethod
    def linear(cls, a: int, b: int) -> "LengthSpec":
        return cls("linear", a, b)

    @classmethod
    def geometric(cls, base: int, b: int) -> "LengthSpec":
        return cls("geometric", base, b)

    def problems(self) -> list:
        if self.kind == "constant":
            return [] if self.a >= 1 else ["constant length must be >= 1"]
        if self.kind == "linear":
            out = []
            if self.a < 1:
                out.append("linear slope must be >= 1")
            if self.a + self.b < 1:
                out.append("linear lengths must start at >= 1")
            return out
        if self.kind == "geometric":
            out = []
            if self.a < 2:
                out.append("geometric base must be >= 2")
            if self.b < 1:
                out.append("geometric scale must be >= 1")
            return out
        return [f"unknown length kind {self.kind!r}"]

    def length(self, k: int) -> int:
        if k < 1:
            raise ValueError("family members are numbered from 1")
        if self.kind == "constant":
            return self.a
        if self.kind == "linear":
            return self.a * k + self.b
        return self.b * self.a ** k

    @property
    def bounded(self) -> bool:
        return self.kind == "constant"


@dataclass(frozen=True)
class Finite:
    id: str
    map: tuple
    weights: tuple
    kind = "finite"

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        object.__setattr__(self, "weights", tuple(self.weights))


@dataclass(frozen=True)
class ForwardRay:
    id: str
    weights: EventuallyPeriodicWord
    kind = "forward_ray"


@dataclass(frozen=True)
class BiRay:
    id: str
    block: tuple
    kind = "bi_ray"

    def __post_init__(self):
        object.__setattr__(self, "block", tuple(self.block))


@dataclass(frozen=True)
class BackwardTail:
    id: str
    target: NodeAddress
    weights: EventuallyPeriodicWord
    kind = "backward_tail"


@dataclass(frozen=True)
class CycleFamily:
    id: str
    lengths: LengthSpec
    weights: EventuallyPeriodicWord
    kind = "cycle_family"


@dataclass(frozen=True)
class TailFamily:
    id: str
    target_component: str
    weights: EventuallyPeriodicWord
    kind = "tail_family"


Component = Union[Finite, ForwardRay, BiRay, BackwardTail, CycleFamily, TailFamily]
TAIL_KINDS = (BackwardTail, TailFamily)
BASE_KINDS = (Finite, ForwardRay, BiRay, CycleFamily)


@dataclass(frozen=True)
class Presentation:
    field: FieldSpec
    components: tuple
    _by_id: dict = field(init=False, repr=False, compare=False)
    _tails_at: dict = field(init=False, repr=False, compare=False)
    _families_on: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        by_id = {}
        for c in self.components:
            by_id.setdefault(c.id, c)
        tails_at, families_on = {}, {}
        for c in self.components:
            if isinstance(c, BackwardTail):
                tails_at.setdefault(NodeAddress(*c.target), []).append(c)
            elif isinstance(c, TailFamily):
                families_on.setdefault(c.target_component, []).append(c)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_tails_at", tails_at)
        object.__setattr__(self, "_families_on", families_on)

    def component(self, cid: str) -> Component:
        try:
            return self._by_id[cid]
        except KeyError:
            raise AddressOutOfRange(f"no component {cid!r}") from None

    def tails_at(self, a: NodeAddress) -> list:
        return self._tails_at.get(a, [])

    def families_on(self, cid: str) -> list:
        return self._families_on.get(cid, [])

    @property
    def is_finite(self) -> bool:
        return all(isinstance(c, Finite) for c in self.components)

    def map_words(self, fn) -> "Presentation":
        """Copy with every weight replaced by ``fn(weight)``."""

        def word(w):
            return EventuallyPeriodicWord([fn(x) for x in w.prefix], [fn(x) for x in w.block])

        out = []
        for c in self.components:
            if isinstance(c, Finite):
                out.append(Finite(c.id, c.map, [fn(x) for x in c.weights]))
            elif isinstance(c, BiRay):
                out.append(BiRay(c.id, [fn(x) for x in c.block]))
            elif isinstance(c, ForwardRay):
                out.append(ForwardRay(c.id, word(c.weights)))
            elif isinstance(c, BackwardTail):
                out.append(BackwardTail(c.id, c.target, word(c.weights)))
            elif isinstance(c, CycleFamily):
                out.append(CycleFamily(c.id, c.lengths, word(c.weights)))
            else:
                out.append(TailFamily(c.id, c.target_component, word(c.weights)))
        return Presentation(self.field, out)

    def unweighted(self) -> "Presentation":
        """The same map with every weight set to 1 (the plain generalized shift)."""
        one = self.field.one
        return self.map_words(lambda _x: one)


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    component: Optional[str]
    message: str

    def __str__(self):
        where = f" [{self.component}]" if self.component is not None else ""
        return f"{self.code}{where}: {self.message}"


class InvalidPresentation(PresentationError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _weights_of(c: Component) -> list:
    if isinstance(c, Finite):
        return list(c.weights)
    if isinstance(c, BiRay):
        return list(c.block)
    return list(c.weights.prefix) + list(c.weights.block)


def validate(P: Presentation) -> list:
    out = []
    if not P.components:
        out.append(Violation("NoComponents", None, "a presentation needs at least one component"))
    seen = set()
    for c in P.components:
        if c.id in seen:
            out.append(Violation("DuplicateId", c.id, "component ids must be unique"))
        seen.add(c.id)
    for c in P.components:
        for x in _weights_of(c):
            if not isinstance(x, FieldElement) or x.spec != P.field:
                out.append(Violation("FieldMismatch", c.id, f"weight {x!r} is not in {P.field}"))
                break
        if isinstance(c, Finite):
            n = len(c.map)
            if n == 0:
                out.append(Violation("EmptyFinite", c.id, "finite component has no nodes"))
            if len(c.weights) != n:
                out.append(Violation("WeightCountMismatch", c.id,
                                     f"{len(c.weights)} weights for {n} nodes"))
            bad = [i for i in c.map if not (isinstance(i, int) and 0 <= i < n)]
            if bad:
                out.append(Violation("MapOutOfRange", c.id, f"images {bad} outside 0..{n - 1}"))
        elif isinstance(c, BiRay):
            if not c.block:
                out.append(Violation("EmptyBlock", c.id, "bi-ray weight block is empty"))
        else:
            if not c.weights.block:
                out.append(Violation("EmptyBlock", c.id, "weight word has an empty repeating block"))
        if isinstance(c, CycleFamily):
            for msg in c.lengths.problems():
                out.append(Violation("BadLength", c.id, msg))
        if isinstance(c, (BackwardTail, TailFamily)):
            tid = c.target.component if isinstance(c, BackwardTail) else c.target_component
            target = P._by_id.get(tid)
            if target is None:
                out.append(Violation("UnknownTarget", c.id, f"no component {tid!r}"))
            elif isinstance(target, TAIL_KINDS):
                out.append(Violation("BadAttachmentKind", c.id,
                                     f"cannot attach onto {target.kind} {tid!r}"))
            elif isinstance(c, BackwardTail) and not _target_structurally_valid(target):
                pass  # the target's own violations are reported on the target
            elif isinstance(c, BackwardTail):
                try:
                    check_address(P, NodeAddress(*c.target))
                except AddressOutOfRange as e:
                    out.append(Violation("TargetOutOfRange", c.id, str(e)))
    return out


def _target_structurally_valid(c: Component) -> bool:
    if isinstance(c, Finite):
        return len(c.map) > 0
    if isinstance(c, CycleFamily):
        return not c.lengths.problems()
    return True


def require_valid(P: Presentation) -> Presentation:
    v = validate(P)
    if v:
        raise InvalidPresentation(v)
    return P


# --------------------------------------------------------------------------
# pointwise evaluation


def check_address(P: Presentation, a: NodeAddress) -> Component:
    c = P.component(a.component)
    ok = True
    if isinstance(c, TailFamily):
        if a.depth < 1:
            ok = False
        else:
            check_address(P, NodeAddress(c.target_component, a.member, a.position))
    elif a.depth != 0:
        ok = False
    elif isinstance(c, CycleFamily):
        ok = a.member >= 1 and 0 <= a.position < c.lengths.length(a.member)
    elif a.member != 1:
        ok = False
    elif isinstance(c, Finite):
        ok = 0 <= a.position < len(c.map)
    elif isinstance(c, ForwardRay):
        ok = a.position >= 0
    elif isinstance(c, BackwardTail):
        ok = a.position >= 1
    if not ok:
        raise AddressOutOfRange(f"{a} is not a node of {c.kind} {c.id!r}")
    return c


def eval_phi(P: Presentation, a: NodeAddress) -> NodeAddress:
    c = check_address(P, a)
    if isinstance(c, Finite):
        return NodeAddress(c.id, 1, c.map[a.position])
    if isinstance(c, (ForwardRay, BiRay)):
        return NodeAddress(c.id, 1, a.position + 1)
    if isinstance(c, BackwardTail):
        if a.position == 1:
            return NodeAddress(*c.target)
        return NodeAddress(c.id, 1, a.position - 1)
    if isinstance(c, CycleFamily):
        return NodeAddress(c.id, a.member, (a.position + 1) % c.lengths.length(a.member))
    if a.depth == 1:
        return NodeAddress(c.target_component, a.member, a.position)
    return NodeAddress(c.id, a.member, a.position, a.depth - 1)


def eval_weight(P: Presentation, a: NodeAddress) -> FieldElement:
    c = check_address(P, a)
    if isinstance(c, Finite):
        return c.weights[a.position]
    if isinstance(c, BiRay):
        return c.block[a.position % len(c.block)]
    if isinstance(c, (ForwardRay, CycleFamily)):
        return c.weights.at(a.position)
    if isinstance(c, BackwardTail):
        return c.weights.at(a.position - 1)
    return c.weights.at(a.depth - 1)


def preimages(P: Presentation, a: NodeAddress) -> list:
    """All nodes mapped onto ``a`` (always a finite list in this model)."""
    c = check_address(P, a)
    out = []
    if isinstance(c, BackwardTail):
        return [NodeAddress(c.id, 1, a.position + 1)]
    if isinstance(c, TailFamily):
        return [NodeAddress(c.id, a.member, a.position, a.depth + 1)]
    if isinstance(c, Finite):
        out = [NodeAddress(c.id, 1, j) for j, i in enumerate(c.map) if i == a.position]
    elif isinstance(c, ForwardRay):
        if a.position > 0:
            out = [NodeAddress(c.id, 1, a.position - 1)]
    elif isinstance(c, BiRay):
        out = [NodeAddress(c.id, 1, a.position - 1)]
    elif isinstance(c, CycleFamily):
        ell = c.lengths.length(a.member)
        out = [NodeAddress(c.id, a.member, (a.position - 1) % ell)]
    out.extend(NodeAddress(t.id, 1, 1) for t in P.tails_at(a))
    out.extend(NodeAddress(f.id, a.member, a.position, 1) for f in P.families_on(c.id))
    return out


# --------------------------------------------------------------------------
# enumeration


def canonical_nodes(P: Presentation, cid: str) -> Iterator[NodeAddress]:
    """Every node of a non-tail component, each exactly once, in a fixed order."""
    c = P.component(cid)
    if isinstance(c, Finite):
        for i in range(len(c.map)):
            yield NodeAddress(cid, 1, i)
    elif isinstance(c, ForwardRay):
        i = 0
        while True:
            yield NodeAddress(cid, 1, i)
            i += 1
    elif isinstance(c, BiRay):
        yield NodeAddress(cid, 1, 0)
        n = 1
        while True:
            yield NodeAddress(cid, 1, n)
            yield NodeAddress(cid, 1, -n)
            n += 1
    elif isinstance(c, CycleFamily):
        k = 1
        while True:
            for i in range(c.lengths.length(k)):
                yield NodeAddress(cid, k, i)
            k += 1
    else:
        raise PresentationError(f"{c.kind} {cid!r} has no canonical base enumeration")


def iter_nodes(P: Presentation, radius: int) -> Iterator[NodeAddress]:
    """Lazy form of :func:`enumerate_nodes`."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    for c in P.components:
        if isinstance(c, Finite):
            for i in range(len(c.map)):
                yield NodeAddress(c.id, 1, i)
        elif isinstance(c, ForwardRay):
            for i in range(radius + 1):
                yield NodeAddress(c.id, 1, i)
        elif isinstance(c, BiRay):
            for n in range(-radius, radius + 1):
                yield NodeAddress(c.id, 1, n)
        elif isinstance(c, BackwardTail):
            for j in range(1, radius + 1):
                yield NodeAddress(c.id, 1, j)
        elif isinstance(c, CycleFamily):
            for k in range(1, radius + 1):
                for i in range(min(c.lengths.length(k), radius + 1)):
                    yield NodeAddress(c.id, k, i)
        else:
            # tails hanging off the first `radius` target nodes, to depth `radius`
            base = canonical_nodes(P, c.target_component)
            for _, b in zip(range(radius), base):
                for j in range(1, radius + 1):
                    yield NodeAddress(c.id, b.member, b.position, j)


def enumerate_nodes(P: Presentation, radius: int) -> list:
    """Deterministic finite cover of Gamma, growing monotonically with ``radius``."""
    return list(iter_nodes(P, radius))


# --------------------------------------------------------------------------
# zero set


@dataclass(frozen=True)
class ComponentZeros:
    component: str
    explicit: tuple
    block_offsets: tuple
    infinite: bool


@dataclass(frozen=True)
class ZeroSetSummary:
    components: tuple
    zero_set_empty: bool
    zero_set_finite: bool

    def for_component(self, cid: str) -> ComponentZeros:
        for z in self.components:
            if z.component == cid:
                return z
        raise KeyError(cid)


def _target_is_finite(P: Presentation, cid: str) -> bool:
    return isinstance(P.component(cid), Finite)


def zero_set_summary(P: Presentation) -> ZeroSetSummary:
    """Where the weights vanish, per component.

    ``explicit`` lists finite-table indices or zero positions inside a word
    prefix; ``block_offsets`` lists zero offsets inside the repeating block.
    """
    parts = []
    empty = True
    for c in P.components:
        if isinstance(c, Finite):
            z = ComponentZeros(c.id, tuple(i for i, x in enumerate(c.weights) if not x), (), False)
        elif isinstance(c, BiRay):
            offs = tuple(i for i, x in enumerate(c.block) if not x)
            z = ComponentZeros(c.id, (), offs, bool(offs))
        else:
            w = c.weights
            offs = w.block_zero_offsets()
            pz = w.prefix_zeros()
            if isinstance(c, (ForwardRay, BackwardTail)):
                infinite = bool(offs)
            elif isinstance(c, CycleFamily):
                fz = w.first_zero()
                if c.lengths.bounded:
                    infinite = fz is not None and fz < c.lengths.length(1)
                else:
                    infinite = fz is not None
            else:
                if _target_is_finite(P, c.target_component):
                    infinite = bool(offs)
                else:
                    infinite = bool(offs or pz)
            z = ComponentZeros(c.id, pz, offs, infinite)
        if isinstance(c, CycleFamily):
            nonempty = c.weights.first_zero() is not None and (
                not c.lengths.bounded or c.weights.first_zero() < c.lengths.length(1))
        else:
            nonempty = bool(z.explicit or z.block_offsets)
        empty = empty and not nonempty
        parts.append(z)
    return ZeroSetSummary(tuple(parts), empty, not any(z.infinite for z in parts))
