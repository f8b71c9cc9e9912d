"""Bracket data model, sign normalization, odd-class reduction, evaluation.

A bracket is a relative invariant query: target genus, degree, an ordered
list of descendent insertions and a list of ramification profiles.  Odd
insertions anticommute; the evaluation pipeline removes identity
descendents with the Virasoro rules, removes odd descendents with the
fixed-point-free-involution formula, and hands the stationary remainder to
the character-sum engine.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .exactnum import DomainError, binomial
from .hurwitz import stationary
from .partitions import Partition, check_partition

IDENTITY = "1"
OMEGA = "w"
ALPHA = "a"
BETA = "b"

_KIND_RANK = {IDENTITY: 0, OMEGA: 1, ALPHA: 2, BETA: 3}


@dataclass(frozen=True)
class CohClass:
    kind: str
    index: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise DomainError(f"unknown cohomology class kind {self.kind!r}")
        if self.kind in (ALPHA, BETA) and self.index < 1:
            raise DomainError("odd classes need index >= 1")
        if self.kind in (IDENTITY, OMEGA) and self.index != 0:
            raise DomainError("even classes carry no index")

    @property
    def is_odd(self) -> bool:
        return self.kind in (ALPHA, BETA)

    def __str__(self):
        return self.kind if not self.is_odd else f"{self.kind}{self.index}"


def identity() -> CohClass:
    return CohClass(IDENTITY)


def omega() -> CohClass:
    return CohClass(OMEGA)


def alpha(i: int) -> CohClass:
    return CohClass(ALPHA, i)


def beta(i: int) -> CohClass:
    return CohClass(BETA, i)


@dataclass(frozen=True)
class Insertion:
    level: int
    cls: CohClass

    def __post_init__(self):
        if self.level < 0:
            raise DomainError("descendent level must be nonnegative")

    def sort_key(self):
        return (_KIND_RANK[self.cls.kind], self.cls.index, self.level)

    def __str__(self):
        return f"t{self.level}({self.cls})"


def tau(level: int, cls: CohClass) -> Insertion:
    return Insertion(level, cls)


@dataclass(frozen=True)
class Bracket:
    target_genus: int
    degree: int
    insertions: Tuple[Insertion, ...]
    profiles: Tuple[Partition, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.target_genus < 0 or self.degree < 0:
            raise DomainError("genus and degree must be nonnegative")
        for ins in self.insertions:
            if ins.cls.is_odd and ins.cls.index > self.target_genus:
                raise DomainError(
                    f"odd class index {ins.cls.index} exceeds target genus")
        for eta in self.profiles:
            if sum(eta) != self.degree:
                raise DomainError(f"profile {eta} does not partition {self.degree}")

    @property
    def euler(self) -> int:
        """chi(X^*) = 2 - 2g - m for the punctured target."""
        return 2 - 2 * self.target_genus - len(self.profiles)

    def counts(self, kind: str) -> int:
        return sum(1 for ins in self.insertions if ins.cls.kind == kind)

    def __str__(self):
        ins = " ".join(str(i) for i in self.insertions)
        prof = "; ".join("(" + ",".join(map(str, p)) + ")" for p in self.profiles)
        return f"<{ins}{' | ' + prof if prof else ''}>"


def bracket(genus: int, degree: int, insertions: Iterable[Insertion],
            profiles: Iterable[Sequence[int]] = ()) -> Bracket:
    return Bracket(genus, degree, tuple(insertions),
                   tuple(check_partition(p) for p in profiles))


def _perm_parity(keys: Sequence) -> int:
    inv = sum(1 for i in range(len(keys)) for j in range(i + 1, len(keys))
              if keys[i] > keys[j])
    return -1 if inv % 2 else 1


def normalize(b: Bracket) -> Tuple[int, Bracket]:
    """Canonical insertion order with the Grassmann sign.

    Even insertions are sorted freely; odd insertions are sorted by
    (alpha before beta, index, level) and contribute the parity of the
    sorting permutation.  Two identical odd insertions give sign 0.
    """
    odd = [ins for ins in b.insertions if ins.cls.is_odd]
    even = [ins for ins in b.insertions if not ins.cls.is_odd]
    keys = [ins.sort_key() for ins in odd]
    if len(set(keys)) != len(keys):
        return 0, Bracket(b.target_genus, b.degree, tuple(), b.profiles)
    sign = _perm_parity(keys)
    ordered = sorted(even, key=Insertion.sort_key) + sorted(odd, key=Insertion.sort_key)
    return sign, Bracket(b.target_genus, b.degree, tuple(ordered), b.profiles)


def pairing(c1: CohClass, c2: CohClass) -> Fraction:
    """Intersection pairing on H^1: alpha_i . beta_i = 1, skew."""
    if not (c1.is_odd and c2.is_odd):
        raise DomainError("pairing is defined for odd classes only")
    if c1.kind == ALPHA and c2.kind == BETA and c1.index == c2.index:
        return Fraction(1)
    if c1.kind == BETA and c2.kind == ALPHA and c1.index == c2.index:
        return Fraction(-1)
    return Fraction(0)


class BracketSum:
    """Finite rational combination of normalized brackets."""

    def __init__(self, terms: Iterable[Tuple[Fraction, Bracket]] = ()):
        self.terms: Dict[Bracket, Fraction] = {}
        for coeff, b in terms:
            self.add(coeff, b)

    def add(self, coeff: Fraction, b: Bracket) -> None:
        sign, canon = normalize(b)
        if sign == 0 or coeff == 0:
            return
        new = self.terms.get(canon, Fraction(0)) + sign * coeff
        if new:
            self.terms[canon] = new
        else:
            self.terms.pop(canon, None)

    def extend(self, other: "BracketSum", scale: Fraction = Fraction(1)) -> None:
        for b, c in other.terms.items():
            self.add(scale * c, b)

    def items(self):
        return list(self.terms.items())

    def __len__(self):
        return len(self.terms)


def _involutions(n: int) -> List[List[Tuple[int, int]]]:
    """Fixed point free involutions of {0..n-1} as ordered orbit lists."""
    if n % 2:
        return []
    if n == 0:
        return [[]]
    out = []
    first = 0
    for partner in range(1, n):
        rest = [x for x in range(1, n) if x != partner]
        relabel = {x: i for i, x in enumerate(rest)}
        for sub in _involutions(n - 2):
            inv = {v: k for k, v in relabel.items()}
            out.append([(first, partner)] + [(inv[a], inv[b]) for a, b in sub])
    return out


def _involution_sign(orbits: List[Tuple[int, int]]) -> int:
    flat = [x for orbit in orbits for x in orbit]
    return _perm_parity(flat)


def odd_reduce(b: Bracket) -> BracketSum:
    """Trade odd insertions for point-class insertions.

    Sums over fixed point free involutions of the odd slots; each orbit
    (e1, e2) contributes binom(y1+y2, y1) * (gamma_e1 . gamma_e2) and is
    replaced by the insertion tau_{y1+y2-1}(omega).  An orbit of two
    level-0 insertions would produce a negative level; its completed-cycle
    value vanishes, so the term is dropped.  Imbalanced odd content makes
    every involution's pairing product vanish.
    """
    if any(ins.cls.kind == IDENTITY for ins in b.insertions):
        raise DomainError("odd_reduce requires identity-free brackets")
    odd = [ins for ins in b.insertions if ins.cls.is_odd]
    evens = [ins for ins in b.insertions if not ins.cls.is_odd]
    out = BracketSum()
    if len(odd) % 2:
        return out
    for orbits in _involutions(len(odd)):
        coeff = Fraction(_involution_sign(orbits))
        new_ins: List[Insertion] = []
        dead = False
        for e1, e2 in orbits:
            p = pairing(odd[e1].cls, odd[e2].cls)
            if p == 0:
                coeff = Fraction(0)
                break
            y1, y2 = odd[e1].level, odd[e2].level
            coeff *= binomial(y1 + y2, y1) * p
            if y1 + y2 - 1 < 0:
                dead = True
                break
            new_ins.append(Insertion(y1 + y2 - 1, omega()))
        if coeff == 0 or dead:
            continue
        out.add(coeff, Bracket(b.target_genus, b.degree,
                               tuple(new_ins) + tuple(evens), b.profiles))
    return out


_memo: Dict[Bracket, Fraction] = {}
_memo_lock = threading.Lock()


def evaluate(b: Bracket) -> Fraction:
    """Exact disconnected relative invariant of the bracket.

    Pipeline: Virasoro removal of identity descendents, involution removal
    of odd descendents, character sum on the stationary remainder.  Values
    are memoized on canonical brackets.
    """
    sign, canon = normalize(b)
    if sign == 0:
        return Fraction(0)
    cached = _memo.get(canon)
    if cached is not None:
        return sign * cached
    value = _evaluate_canonical(canon)
    with _memo_lock:
        _memo[canon] = value
    return sign * value


def _evaluate_canonical(b: Bracket) -> Fraction:
    if b.counts(ALPHA) != b.counts(BETA):
        # Hodge-type imbalance: the invariant vanishes identically.
        return Fraction(0)
    if b.counts(IDENTITY):
        from .virasoro import eliminate_tau1
        total = Fraction(0)
        for term, coeff in eliminate_tau1(b).items():
            total += coeff * evaluate(term)
        return total
    if any(ins.cls.is_odd for ins in b.insertions):
        total = Fraction(0)
        for term, coeff in odd_reduce(b).items():
            total += coeff * evaluate(term)
        return total
    levels = [ins.level for ins in b.insertions]
    return stationary(b.target_genus, b.degree, levels, b.profiles)


def evaluate_sum(s: BracketSum) -> Fraction:
    return sum((c * evaluate(b) for b, c in s.items()), Fraction(0))
