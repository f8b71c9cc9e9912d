"""Partition combinatorics and symmetric-group character data.

Characters are computed by the Murnaghan-Nakayama rule with memoization on
(shape, class) pairs; full tables are materialized per degree on first use
and shared behind a lock, since the big character sums consume whole
columns.  Dimensions come from the hook-length formula.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from .exactnum import DomainError

Partition = Tuple[int, ...]


def check_partition(parts) -> Partition:
    p = tuple(int(x) for x in parts)
    if any(x <= 0 for x in p):
        raise DomainError(f"partition parts must be positive: {p}")
    if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise DomainError(f"partition parts must be weakly decreasing: {p}")
    return p


def enumerate_partitions(d: int) -> List[Partition]:
    """All partitions of d, reverse-lexicographic: (d) first, (1,...,1) last."""
    if d < 0:
        raise DomainError("d must be nonnegative")
    out: List[Partition] = []

    def rec(remaining: int, largest: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(d, d if d else 1, ())
    return out


def partitions_upto(n: int) -> List[Partition]:
    """All partitions of every size 0..n (Fock-basis enumeration order)."""
    out: List[Partition] = []
    for d in range(n + 1):
        out.extend(enumerate_partitions(d))
    return out


def aut_factor(mu: Partition) -> Fraction:
    """z(mu) = |Aut(mu)| * prod(mu_i), the gluing weight of degeneration."""
    mu = check_partition(mu)
    out = 1
    run = 1
    for i, part in enumerate(mu):
        out *= part
        if i > 0 and part == mu[i - 1]:
            run += 1
        else:
            run = 1
        out *= run
    return Fraction(out)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape lam (hook lengths)."""
    lam = check_partition(lam)
    d = sum(lam)
    conj = conjugate(lam)
    num = math.factorial(d)
    for i, row in enumerate(lam):
        for j in range(row):
            hook = row - j + conj[j] - i - 1
            assert num % hook == 0
            num //= hook
    return num


def class_size(eta: Partition) -> int:
    """|C_eta| = d! / z(eta)."""
    eta = check_partition(eta)
    z = aut_factor(eta)
    return math.factorial(sum(eta)) // int(z)


def _border_strips(lam: Partition, size: int) -> Iterator[Tuple[Partition, int]]:
    """(shape after removal, strip height) for all border strips of a size.

    Beta-set method: with B = {lam_i + n - i}, removing a size-s strip is
    replacing some b in B by b - s (if absent); the height is the number of
    elements of B strictly between the two.
    """
    n = len(lam)
    beta = [lam[i] + (n - 1 - i) for i in range(n)]
    bset = set(beta)
    for b in beta:
        nb = b - size
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new_beta = sorted((bset - {b}) | {nb}, reverse=True)
        shape = tuple(x - (n - 1 - i) for i, x in enumerate(new_beta))
        yield tuple(x for x in shape if x > 0), height


class _MNCache:
    def __init__(self):
        self.cache: Dict[Tuple[Partition, Partition], int] = {}

    def chi(self, lam: Partition, eta: Partition) -> int:
        if sum(lam) != sum(eta):
            raise DomainError("character needs |lam| = |eta|")
        if not lam:
            return 1
        key = (lam, eta)
        if key in self.cache:
            return self.cache[key]
        # recurse on the largest part of eta for shallow recursion
        part, rest = eta[0], eta[1:]
        total = 0
        for shape, height in _border_strips(lam, part):
            total += (-1) ** height * self.chi(shape, rest)
        self.cache[key] = total
        return total


_mn = _MNCache()


def character(lam: Partition, eta: Partition) -> int:
    """chi^lam_eta by Murnaghan-Nakayama (memoized)."""
    return _mn.chi(check_partition(lam), check_partition(eta))


class CharacterTable:
    """Full character data of S(d): dim, chi, class sizes, with invariants."""

    def __init__(self, degree: int, partitions: List[Partition],
                 dim: Dict[Partition, int], chi: Dict[Tuple[Partition, Partition], int],
                 sizes: Dict[Partition, int]):
        self.degree = degree
        self.partitions = partitions
        self.dim = dim
        self.chi = chi
        self.class_size = sizes

    @classmethod
    def build(cls, degree: int) -> "CharacterTable":
        parts = enumerate_partitions(degree)
        dim = {lam: dimension(lam) for lam in parts}
        sizes = {eta: class_size(eta) for eta in parts}
        chi = {(lam, eta): character(lam, eta) for lam in parts for eta in parts}
        return cls(degree, parts, dim, chi, sizes)

    def validate(self) -> bool:
        d_fact = math.factorial(self.degree)
        if sum(v * v for v in self.dim.values()) != d_fact:
            return False
        if sum(self.class_size.values()) != d_fact:
            return False
        for eta in self.partitions:
            for sigma in self.partitions:
                s = sum(self.chi[(lam, eta)] * self.chi[(lam, sigma)]
                        for lam in self.partitions)
                expect = d_fact // self.class_size[eta] if eta == sigma else 0
                if s != expect:
                    return False
        return True


class TableStore:
    """Per-degree tables, built once under a lock, optionally disk-backed."""

    def __init__(self):
        self._tables: Dict[int, CharacterTable] = {}
        self._lock = threading.Lock()
        self.loader = None  # set by the cli module for disk persistence
        self.saver = None

    def get(self, degree: int) -> CharacterTable:
        table = self._tables.get(degree)
        if table is not None:
            return table
        with self._lock:
            table = self._tables.get(degree)
            if table is not None:
                return table
            if self.loader is not None:
                table = self.loader(degree)
            if table is None:
                table = CharacterTable.build(degree)
                if self.saver is not None:
                    self.saver(table)
            self._tables[degree] = table
            return table


tables = TableStore()
