"""Brute-force oracle on a finite index set.

The shift is materialised as a transition table on base-p encoded
configurations (entry i is digit i), and identities are checked by
comparing tables or by direct enumeration.  Exhaustive below
``EXHAUSTIVE_LIMIT`` states, seeded sampling above it.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analyzer import HypothesisNotMet
from .field import FieldElement, FieldSpec
from .presentation import Finite, NodeAddress, Presentation

STATE_CAP = 2 ** 20
EXHAUSTIVE_LIMIT = 4096
QUOTIENT_MAX_N = 12


class LabError(ValueError):
    pass


class SizeMismatch(LabError):
    pass


class StateSpaceTooLarge(LabError):
    pass


class NotPeriodic(LabError):
    pass


class NotFinitePresentation(LabError):
    pass


class LabAssertionError(AssertionError):
    pass


def _as_int(v) -> int:
    return v.value if isinstance(v, FieldElement) else int(v)


@dataclass(frozen=True)
class FiniteSystem:
    field: FieldSpec
    phi: tuple
    weights: tuple

    def __post_init__(self):
        phi = tuple(int(j) for j in self.phi)
        if len(self.weights) != len(phi):
            raise SizeMismatch(f"{len(phi)} images but {len(self.weights)} weights")
        if not phi:
            raise LabError("a finite system needs at least one index")
        if any(not 0 <= j < len(phi) for j in phi):
            raise LabError(f"image table {phi} leaves [0, {len(phi) - 1}]")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "weights", tuple(self.field(_as_int(v)) for v in self.weights))
        if self.states > STATE_CAP:
            raise StateSpaceTooLarge(f"{self.field.p}^{self.n} states exceeds {STATE_CAP}")

    @property
    def n(self) -> int:
        return len(self.phi)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def states(self) -> int:
        return self.field.p ** len(self.phi)

    @property
    def w(self) -> np.ndarray:
        return np.array([x.value for x in self.weights], dtype=np.int64)

    @property
    def zero_set(self) -> frozenset:
        return frozenset(i for i, x in enumerate(self.weights) if not x)

    def with_nonzero_weights(self) -> "FiniteSystem":
        return FiniteSystem(self.field, self.phi, [x.value or 1 for x in self.weights])

    def unweighted(self) -> "FiniteSystem":
        return FiniteSystem(self.field, self.phi, [1] * self.n)


def make_system(p: int, phi: Sequence[int], weights: Sequence[int]) -> FiniteSystem:
    return FiniteSystem(FieldSpec(p), tuple(phi), tuple(weights))


@dataclass(frozen=True)
class Configuration:
    entries: tuple

    @property
    def values(self) -> tuple:
        return tuple(x.value for x in self.entries)

    def encode(self) -> int:
        p = self.entries[0].spec.p
        return sum(x.value * p ** i for i, x in enumerate(self.entries))

    def __len__(self):
        return len(self.entries)


def configuration(F: FieldSpec, values: Sequence) -> Configuration:
    return Configuration(tuple(F(_as_int(v)) for v in values))


def encode(S: FiniteSystem, x: Configuration) -> int:
    if len(x) != S.n:
        raise SizeMismatch(f"configuration of length {len(x)} for n={S.n}")
    return x.encode()


def decode(S: FiniteSystem, code: int) -> Configuration:
    if not 0 <= code < S.states:
        raise ValueError(f"code {code} outside [0, {S.states})")
    vals = []
    for _ in range(S.n):
        code, d = divmod(code, S.p)
        vals.append(d)
    return configuration(S.field, vals)


def apply_shift(S: FiniteSystem, x) -> Configuration:
    if not isinstance(x, Configuration):
        x = configuration(S.field, x)
    if len(x) != S.n:
        raise SizeMismatch(f"configuration of length {len(x)} for n={S.n}")
    return Configuration(tuple(S.weights[i] * x.entries[S.phi[i]] for i in range(S.n)))


# --------------------------------------------------------------------------
# vectorised encoding


def _powers(S: FiniteSystem) -> np.ndarray:
    return S.p ** np.arange(S.n, dtype=np.int64)


def digits(S: FiniteSystem, codes: np.ndarray) -> np.ndarray:
    """Row r holds the entries of configuration ``codes[r]``."""
    codes = np.asarray(codes, dtype=np.int64)
    return ((codes[:, None] // _powers(S)[None, :]) % S.p).astype(np.int64)


def encode_digits(S: FiniteSystem, D: np.ndarray) -> np.ndarray:
    return D @ _powers(S)


def _apply_digits(S: FiniteSystem, D: np.ndarray) -> np.ndarray:
    return (D[:, list(S.phi)] * S.w[None, :]) % S.p


def apply_codes(S: FiniteSystem, codes: np.ndarray) -> np.ndarray:
    return encode_digits(S, _apply_digits(S, digits(S, codes)))


def transition_table(S: FiniteSystem, max_states: int = STATE_CAP) -> np.ndarray:
    _require_cap(S, max_states)
    out = np.zeros(S.states, dtype=np.int64)
    chunk = 1 << 16
    for lo in range(0, S.states, chunk):
        out[lo:lo + chunk] = apply_codes(S, np.arange(lo, min(lo + chunk, S.states), dtype=np.int64))
    return out


def _require_cap(S: FiniteSystem, max_states: int) -> None:
    if S.states > max_states:
        raise StateSpaceTooLarge(f"{S.p}^{S.n} = {S.states} states exceeds {max_states}")


def _test_codes(S: FiniteSystem, samples: int, seed: int) -> np.ndarray:
    if S.states <= EXHAUSTIVE_LIMIT:
        return np.arange(S.states, dtype=np.int64)
    rng = np.random.default_rng(seed)
    return rng.integers(0, S.states, size=max(samples, 1), dtype=np.int64)


# --------------------------------------------------------------------------
# composition and iterates


def compose(S1: FiniteSystem, S2: FiniteSystem) -> FiniteSystem:
    """The single weighted shift equal to ``S1 after S2``."""
    if S1.n != S2.n or S1.field != S2.field:
        raise SizeMismatch("systems differ in size or field")
    psi, u = S1.phi, S1.weights
    phi, w = S2.phi, S2.weights
    return FiniteSystem(S1.field, tuple(phi[psi[a]] for a in range(S1.n)),
                        tuple(u[a] * w[psi[a]] for a in range(S1.n)))


def iterate_system(S: FiniteSystem, k: int) -> FiniteSystem:
    """phi^k with weights w(a) w(phi a) ... w(phi^{k-1} a)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    phi, wts = [], []
    for a in range(S.n):
        acc = S.field.one
        b = a
        for _ in range(k):
            acc = acc * S.weights[b]
            b = S.phi[b]
        phi.append(b)
        wts.append(acc)
    return FiniteSystem(S.field, tuple(phi), tuple(wts))


def power_system(S: FiniteSystem, k: int) -> FiniteSystem:
    return iterate_system(S, k)


def check_composition_law(S1: FiniteSystem, S2: FiniteSystem, samples: int = 256, seed: int = 0,
                          k_max: int = 4) -> bool:
    """Composite system agrees with applying S2 then S1; iterates agree with k-fold application."""
    C = compose(S1, S2)
    codes = _test_codes(S1, samples, seed)
    if not np.array_equal(apply_codes(S1, apply_codes(S2, codes)), apply_codes(C, codes)):
        return False
    for S in (S1, S2):
        cur = codes
        for k in range(1, k_max + 1):
            cur = apply_codes(S, cur)
            if not np.array_equal(cur, apply_codes(iterate_system(S, k), codes)):
                return False
    return True


# --------------------------------------------------------------------------
# quasi-periodicity


def _digest(a: np.ndarray) -> bytes:
    return hashlib.blake2b(a.tobytes(), digest_size=16).digest()


def _weight_product(S: FiniteSystem, a: int, k: int) -> FieldElement:
    acc = S.field.one
    for _ in range(k):
        acc = acc * S.weights[a]
        a = S.phi[a]
    return acc


def _phi_power(phi: Sequence[int], a: int, k: int) -> int:
    for _ in range(k):
        a = phi[a]
    return a


def quasi_period_pair(S: FiniteSystem, max_states: int = STATE_CAP) -> tuple:
    """Least (m, n), ordered by n, with sigma^m = sigma^n; checks the coordinatewise criterion."""
    T = transition_table(S, max_states)
    seen = {}
    cur = T
    k = 1
    while True:
        key = _digest(cur)
        if key in seen:
            m, n = seen[key], k
            break
        seen[key] = k
        cur = T[cur]
        k += 1
    # confirm against the digest and against the index-level criterion
    Tm = T
    for _ in range(m - 1):
        Tm = T[Tm]
    if not np.array_equal(Tm, cur):
        raise LabAssertionError(f"digest collision at ({m}, {n})")
    for a in range(S.n):
        if _phi_power(S.phi, a, m) != _phi_power(S.phi, a, n) and _weight_product(S, a, m):
            raise LabAssertionError(f"index {a} violates the quasi-period criterion at ({m}, {n})")
    return m, n


# --------------------------------------------------------------------------
# fibres and surjective cover


def fibre_gap_indices(S: FiniteSystem) -> frozenset:
    """Indices outside phi(Gamma minus Z)."""
    hit = {S.phi[a] for a in range(S.n) if S.weights[a]}
    return frozenset(range(S.n)) - hit


def fibre_size_check(S: FiniteSystem, max_states: int = STATE_CAP) -> bool:
    T = transition_table(S, max_states)
    counts = np.bincount(T, minlength=S.states)
    return bool(np.all(counts[T] == S.p ** len(fibre_gap_indices(S))))


def upsilon(S: FiniteSystem) -> frozenset:
    """Indices whose forward orbit meets a zero weight."""
    out = set()
    for a in range(S.n):
        b = a
        for _ in range(S.n):
            if not S.weights[b]:
                out.add(a)
                break
            b = S.phi[b]
    return frozenset(out)


def _surjective_cover_codes(S: FiniteSystem, max_states: int = STATE_CAP) -> np.ndarray:
    T = transition_table(S, max_states)
    img = np.unique(T)
    while True:
        nxt = np.unique(T[img])
        if len(nxt) == len(img):
            break
        img = nxt
    if not np.array_equal(np.unique(T[img]), img):
        raise LabAssertionError("shift is not surjective on its stable image")
    ups = sorted(upsilon(S))
    if ups and np.any(digits(S, img)[:, ups]):
        raise LabAssertionError("a point of the surjective cover is nonzero on Upsilon")
    return img


def surjective_cover(S: FiniteSystem, max_states: int = STATE_CAP) -> frozenset:
    return frozenset(decode(S, int(c)) for c in _surjective_cover_codes(S, max_states))


def fix_bijection_check(S: FiniteSystem, max_states: int = STATE_CAP) -> bool:
    """Projection of the surjective cover onto the fixed coordinates is a bijection."""
    if not all(S.weights):
        raise HypothesisNotMet("fixed-point bijection needs nonzero weights")
    fix = [a for a in range(S.n) if S.phi[a] == a]
    if set(periodic_indices(S.phi)) != set(fix):
        raise HypothesisNotMet("every periodic index must be fixed")
    sc = _surjective_cover_codes(S, max_states)
    proj = digits(S, sc)[:, fix]
    proj_codes = proj @ (S.p ** np.arange(len(fix), dtype=np.int64))
    if len(np.unique(proj_codes)) != len(sc) or len(sc) != S.p ** len(fix):
        return False
    # the shift restricted to the fixed coordinates is x_a -> w_a x_a
    sub = FiniteSystem(S.field, tuple(range(len(fix))), tuple(S.weights[a] for a in fix))
    T = transition_table(sub, max_states)
    return len(np.unique(T)) == sub.states


# --------------------------------------------------------------------------
# index-level structure


def periodic_indices(phi: Sequence[int]) -> list:
    n = len(phi)
    return [a for a in range(n) if any(_phi_power(phi, a, k) == a for k in range(1, n + 1))]


def period_of(phi: Sequence[int], a: int) -> Optional[int]:
    b = phi[a]
    for k in range(1, len(phi) + 1):
        if b == a:
            return k
        b = phi[b]
    return None


def cycle_lengths(phi: Sequence[int]) -> list:
    return sorted({period_of(phi, a) for a in periodic_indices(phi)})


def quotient_classes(phi: Sequence[int]) -> list:
    """Classes of a ~ b iff phi^k a = phi^k b for some 1 <= k <= n, sorted by least member."""
    n = len(phi)
    iters = [list(phi)]
    for _ in range(n - 1):
        iters.append([phi[x] for x in iters[-1]])
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for b in range(a + 1, n):
            if any(it[a] == it[b] for it in iters):
                parent[find(b)] = find(a)
    groups = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def quotient_map(phi: Sequence[int]) -> tuple:
    """(classes, induced map on class indices)."""
    classes = quotient_classes(phi)
    where = {a: i for i, g in enumerate(classes) for a in g}
    induced = []
    for g in classes:
        imgs = {where[phi[a]] for a in g}
        if len(imgs) != 1:
            raise LabAssertionError(f"class {g} has images in several classes")
        induced.append(imgs.pop())
    return classes, induced


def quotient_check(phi: Sequence[int]) -> bool:
    phi = list(phi)
    if len(phi) > QUOTIENT_MAX_N:
        raise ValueError(f"quotient check limited to n <= {QUOTIENT_MAX_N}")
    classes, induced = quotient_map(phi)
    if len(set(induced)) != len(induced):
        return False
    where = {a: i for i, g in enumerate(classes) for a in g}
    per = periodic_indices(phi)
    if {where[a] for a in per} != set(periodic_indices(induced)):
        return False
    return all(period_of(induced, where[a]) == period_of(phi, a) for a in per)


def star_identity_check(S: FiniteSystem, beta: int, q: int) -> bool:
    """Product of p*q weights along a q-cycle equals the product of q of them."""
    if q < 1 or _phi_power(S.phi, beta, q) != beta:
        raise NotPeriodic(f"phi^{q}({beta}) != {beta}")
    return _weight_product(S, beta, S.p * q) == _weight_product(S, beta, q)


def indicator(S: FiniteSystem, D: np.ndarray) -> np.ndarray:
    return (D != 0).astype(np.int64)


def indicator_conjugacy_check(S: FiniteSystem, samples: int = 1024, seed: int = 0) -> bool:
    """h(sigma_{phi,w} x) = sigma_phi(h x) where h sends nonzero entries to 1 in GF(2)."""
    if not all(S.weights):
        raise HypothesisNotMet("indicator conjugacy needs nonzero weights")
    D = digits(S, _test_codes(S, samples, seed))
    lhs = indicator(S, _apply_digits(S, D))
    rhs = indicator(S, D)[:, list(S.phi)]
    return bool(np.array_equal(lhs, rhs))


# --------------------------------------------------------------------------
# tau by enumeration


def tau_sup_bruteforce(S: FiniteSystem) -> int:
    """Largest n with a, phi a, ..., phi^n a distinct and all weights nonzero (0 if none)."""
    best = 0
    for a in range(S.n):
        seen = set()
        b = a
        while b not in seen and S.weights[b]:
            seen.add(b)
            b = S.phi[b]
        best = max(best, len(seen) - 1)
    return best


# --------------------------------------------------------------------------
# presentations and random systems


def to_finite_system(P: Presentation) -> tuple:
    """(FiniteSystem, node addresses in index order) for an all-finite presentation."""
    nodes, phi, wts = [], [], []
    for c in P.components:
        if not isinstance(c, Finite):
            raise NotFinitePresentation(f"component {c.id!r} is {c.kind}, not finite")
        off = len(nodes)
        nodes.extend(NodeAddress(c.id, 1, i) for i in range(len(c.map)))
        phi.extend(off + j for j in c.map)
        wts.extend(c.weights)
    states = P.field.p ** len(nodes)
    if states > STATE_CAP:
        raise StateSpaceTooLarge(f"{P.field.p}^{len(nodes)} states exceeds {STATE_CAP}")
    return FiniteSystem(P.field, tuple(phi), tuple(wts)), nodes


def max_n_for(p: int, limit: int = EXHAUSTIVE_LIMIT) -> int:
    n = 0
    while p ** (n + 1) <= limit:
        n += 1
    return n


def random_system(rng: random.Random, p: int, n: int, zero_rate: float = 0.25) -> FiniteSystem:
    phi = [rng.randrange(n) for _ in range(n)]
    wts = [0 if rng.random() < zero_rate else rng.randrange(1, p) for _ in range(n)]
    return make_system(p, phi, wts)


def identity_suite(S: FiniteSystem, seed: int = 0) -> dict:
    """Every finite-lab identity on S, keyed by name."""
    rng = random.Random(seed)
    other = random_system(rng, S.p, S.n)
    out = {
        "composition_law": check_composition_law(other, S, seed=seed)
                           and check_composition_law(S, other, seed=seed),
        "fibre_size": fibre_size_check(S),
    }
    try:
        _surjective_cover_codes(S)
        out["surjective_cover"] = True
    except LabAssertionError:
        out["surjective_cover"] = False
    nz = S.with_nonzero_weights()
    L = math.lcm(*cycle_lengths(S.phi))
    out["fix_bijection"] = fix_bijection_check(power_system(nz, L))
    if S.n <= QUOTIENT_MAX_N:
        out["quotient"] = quotient_check(S.phi)
    out["star_identity"] = all(
        star_identity_check(S, b, q * period_of(S.phi, b))
        for b in periodic_indices(S.phi) for q in (1, 2))
    out["indicator_conjugacy"] = indicator_conjugacy_check(nz, seed=seed)
    try:
        m, n = quasi_period_pair(S)
        out["quasi_period_pair"] = 1 <= m < n
    except LabAssertionError:
        out["quasi_period_pair"] = False
    return out
