"""Stationary invariants of target curves via character sums.

The disconnected invariant with only point-class descendents equals a sum
over partitions lambda of the degree:

    sum (dim lambda / d!)^(2-2g) * prod p_{z_i+1}(lambda)/(z_i+1)!
                                 * prod f_{eta_j}(lambda),

where p_l is the regularized shifted power sum with constant term l! c_{l+1}
and f_eta(lambda) = |C_eta| chi^lambda_eta / dim lambda.  Everything here is
an exact rational; no genus argument is needed (the disconnected bracket
carries none).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactnum import DomainError, c_coefficients
from .partitions import Partition, check_partition, tables


@dataclass(frozen=True)
class StationaryQuery:
    genus: int
    degree: int
    omega_levels: Tuple[int, ...]
    profiles: Tuple[Partition, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.genus < 0 or self.degree < 0:
            raise DomainError("genus and degree must be nonnegative")
        if any(z < 0 for z in self.omega_levels):
            raise DomainError("descendent levels must be nonnegative")
        for eta in self.profiles:
            if sum(eta) != self.degree:
                raise DomainError(f"profile {eta} does not partition {self.degree}")


_c_cache: List[Fraction] = []


def _c(j: int) -> Fraction:
    global _c_cache
    if j >= len(_c_cache):
        _c_cache = c_coefficients(max(2 * j, 8))
    return _c_cache[j]


def completed_cycle(l: int, lam: Partition) -> Fraction:
    """p_l(lambda): shifted power sum plus the constant l! c_{l+1}.

    The sum over rows telescopes against the empty partition, so only the
    rows of lambda contribute.
    """
    if l <= 0:
        raise DomainError("completed cycle needs l >= 1")
    lam = check_partition(lam)
    total = Fraction(0)
    for i, part in enumerate(lam, start=1):
        a = Fraction(2 * part - 2 * i + 1, 2)
        b = Fraction(-2 * i + 1, 2)
        total += a ** l - b ** l
    return total + math.factorial(l) * _c(l + 1)


def f_value(eta: Partition, lam: Partition) -> Fraction:
    """Central character f_eta(lambda) = |C_eta| chi^lambda_eta / dim lambda."""
    eta, lam = check_partition(eta), check_partition(lam)
    if sum(eta) != sum(lam):
        raise DomainError("f_value needs |eta| = |lam|")
    table = tables.get(sum(eta))
    return Fraction(table.class_size[eta] * table.chi[(lam, eta)], table.dim[lam])


def stationary_invariant(q: StationaryQuery) -> Fraction:
    """Disconnected stationary relative invariant of a genus-g target."""
    table = tables.get(q.degree)
    d_fact = math.factorial(q.degree)
    exponent = 2 - 2 * q.genus
    total = Fraction(0)
    for lam in table.partitions:
        weight = Fraction(table.dim[lam], d_fact) ** exponent
        for z in q.omega_levels:
            weight *= completed_cycle(z + 1, lam) / math.factorial(z + 1)
            if weight == 0:
                break
        if weight == 0:
            continue
        for eta in q.profiles:
            weight *= Fraction(table.class_size[eta] * table.chi[(lam, eta)],
                               table.dim[lam])
        total += weight
    return total


def stationary(genus: int, degree: int, levels: Sequence[int],
               profiles: Sequence[Sequence[int]] = ()) -> Fraction:
    """Convenience wrapper building the query from plain sequences."""
    q = StationaryQuery(genus, degree, tuple(int(z) for z in levels),
                        tuple(check_partition(p) for p in profiles))
    return stationary_invariant(q)
