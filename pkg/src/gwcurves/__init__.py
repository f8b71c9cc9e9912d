"""Exact evaluation of relative Gromov-Witten descendent invariants of curves."""

from .brackets import (Bracket, BracketSum, CohClass, Insertion, alpha, beta,
                       bracket, evaluate, identity, normalize, odd_reduce,
                       omega, pairing, tau)
from .exactnum import Rational, TruncatedSeries, rational_str
from .hurwitz import StationaryQuery, completed_cycle, f_value, stationary, stationary_invariant
from .partitions import (CharacterTable, Partition, aut_factor, character,
                         class_size, dimension, enumerate_partitions)

__all__ = [
    "Bracket", "BracketSum", "CohClass", "Insertion", "Rational",
    "StationaryQuery", "TruncatedSeries", "CharacterTable", "Partition",
    "alpha", "aut_factor", "beta", "bracket", "character", "class_size",
    "completed_cycle", "dimension", "enumerate_partitions", "evaluate",
    "f_value", "identity", "normalize", "odd_reduce", "omega", "pairing",
    "rational_str", "stationary", "stationary_invariant", "tau",
]

__version__ = "0.1.0"
