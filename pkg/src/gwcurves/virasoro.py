"""Virasoro and odd-constraint operators on a Grassmann polynomial algebra.

Operators act on polynomials in the even variables t0_k, t1_k and the
anticommuting variables s^i_k, sbar^i_k, one family per descendent class.
Identity-descendent removal is done by mechanical coefficient extraction
from the constraint L_k Z = 0 on the monomial neighborhood of the target
bracket; the classical reaction table is kept as a cross-checked fast path.
Operator identities ([L,L], [L,D], anticommutators) are verified by exact
normal-ordered composition of the term lists.

Variable encoding: (rank, index, level) with rank 0 = t0, 1 = t1,
2 = s, 3 = sbar; index is 0 for the even families.  Odd monomial factors
and odd derivatives are stored in strictly increasing variable order; the
sign conventions are fixed by the word-rewriting normal order below and are
cross-checked against direct application in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .brackets import (ALPHA, BETA, IDENTITY, OMEGA, Bracket, BracketSum,
                       Insertion, CohClass, normalize)
from .exactnum import (DomainError, binomial, binomial_deriv, harmonic,
                       pochhammer, pochhammer_deriv)

Var = Tuple[int, int, int]  # (rank, index, level)

T0, T1, S, SBAR = 0, 1, 2, 3
_RANK_OF_KIND = {IDENTITY: T0, OMEGA: T1, ALPHA: S, BETA: SBAR}
_KIND_OF_RANK = {v: k for k, v in _RANK_OF_KIND.items()}


def var(rank: int, index: int, level: int) -> Var:
    return (rank, index, level)


def is_odd_var(v: Var) -> bool:
    return v[0] >= 2


MonKey = Tuple[Tuple[Var, ...], Tuple[Var, ...]]  # (even multiset, odd set)


def monomial_key(evens: Iterable[Var], odds: Iterable[Var]) -> MonKey:
    odds = tuple(odds)
    assert list(odds) == sorted(odds) and len(set(odds)) == len(odds)
    return (tuple(sorted(evens)), odds)


class GrassmannPolynomial:
    """Sparse polynomial with Grassmann-odd variables.

    Keys are (even multiset, odd tuple in increasing order); the stored
    coefficient is for the monomial with odd factors written left to right
    in increasing order.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[MonKey, Fraction]] = None):
        self.terms = terms or {}

    @classmethod
    def constant(cls, value) -> "GrassmannPolynomial":
        value = Fraction(value)
        return cls({((), ()): value} if value else {})

    @classmethod
    def monomial(cls, evens: Iterable[Var], odds: Iterable[Var],
                 coeff=1) -> "GrassmannPolynomial":
        return cls({monomial_key(evens, odds): Fraction(coeff)})

    def add_term(self, key: MonKey, coeff: Fraction) -> None:
        new = self.terms.get(key, Fraction(0)) + coeff
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "GrassmannPolynomial") -> "GrassmannPolynomial":
        out = GrassmannPolynomial(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def __sub__(self, other: "GrassmannPolynomial") -> "GrassmannPolynomial":
        out = GrassmannPolynomial(dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, -c)
        return out

    def scale(self, c) -> "GrassmannPolynomial":
        c = Fraction(c)
        if not c:
            return GrassmannPolynomial()
        return GrassmannPolynomial({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: MonKey) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def max_level(self) -> int:
        lev = 0
        for evens, odds in self.terms:
            for v in evens + odds:
                lev = max(lev, v[2])
        return lev

    def __repr__(self):
        return f"GrassmannPolynomial({len(self.terms)} terms)"


def _apply_symbols(key: MonKey, me: Tuple[Var, ...], mo: Tuple[Var, ...],
                   do: Tuple[Var, ...], de: Tuple[Var, ...]) -> Tuple[int, Optional[MonKey], int]:
    """Apply x^me x^mo d^do d^de to a monomial; returns (sign, key, eweight).

    eweight is the product of multiplicities consumed by the even
    derivatives.  Returns sign 0 when the action vanishes.
    """
    evens, odds = list(key[0]), list(key[1])
    sign = 1
    weight = 1
    # even derivatives (commute with everything)
    for v in de:
        mult = evens.count(v)
        if not mult:
            return 0, None, 0
        weight *= mult
        evens.remove(v)
    # odd derivatives: written d_{p1} d_{p2} ... (increasing); rightmost acts first
    for p in reversed(do):
        if p not in odds:
            return 0, None, 0
        j = odds.index(p)
        if j % 2:
            sign = -sign
        odds.pop(j)
    # odd multiplications: written o1 o2 ... (increasing); rightmost acts first
    for o in reversed(mo):
        if o in odds:
            return 0, None, 0
        j = sum(1 for q in odds if q < o)
        if j % 2:
            sign = -sign
        odds.insert(j, o)
    evens.extend(me)
    return sign, monomial_key(evens, odds), weight


@dataclass(frozen=True)
class NFTerm:
    """Normal-ordered operator term coeff * x^me x^mo d^do d^de."""
    coeff: Fraction
    me: Tuple[Var, ...]
    mo: Tuple[Var, ...]
    do: Tuple[Var, ...]
    de: Tuple[Var, ...]

    def word(self) -> Tuple[Tuple[str, Var], ...]:
        return (tuple(("x", v) for v in self.me) + tuple(("x", v) for v in self.mo)
                + tuple(("d", v) for v in self.do) + tuple(("d", v) for v in self.de))

    def deriv_vars(self):
        return self.do + self.de

    def mult_vars(self):
        return self.me + self.mo

    def apply_to(self, key: MonKey) -> Tuple[int, Optional[MonKey], Fraction]:
        sign, new_key, weight = _apply_symbols(key, self.me, self.mo, self.do, self.de)
        if sign == 0:
            return 0, None, Fraction(0)
        return sign, new_key, self.coeff * weight * sign


def _term(coeff, me=(), mo=(), do=(), de=()) -> Optional[NFTerm]:
    coeff = Fraction(coeff)
    if not coeff:
        return None
    mo, do = tuple(mo), tuple(do)
    # odd factors must be supplied in canonical (increasing) order
    assert list(mo) == sorted(mo) and list(do) == sorted(do)
    return NFTerm(coeff, tuple(sorted(me)), mo, do, tuple(sorted(de)))


def _sort_odd(seq: List[Var]) -> Tuple[int, Optional[Tuple[Var, ...]]]:
    """Sort odd symbols, tracking the permutation sign; duplicates kill."""
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    order = list(seq)
    for i in range(len(order)):
        for j in range(len(order) - 1 - i):
            if order[j] > order[j + 1]:
                order[j], order[j + 1] = order[j + 1], order[j]
                sign = -sign
    return sign, tuple(order)


def _normal_order(word: Tuple[Tuple[str, Var], ...], coeff: Fraction,
                  out: Dict[Tuple, Fraction]) -> None:
    """Rewrite a word of x/d symbols into normal form, accumulating terms."""
    for i in range(len(word) - 1):
        if word[i][0] == "d" and word[i + 1][0] == "x":
            u, v = word[i][1], word[i + 1][1]
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2:]
            if u == v:
                _normal_order(word[:i] + word[i + 2:], coeff, out)
                _normal_order(swapped, -coeff if is_odd_var(u) else coeff, out)
            else:
                s = -coeff if (is_odd_var(u) and is_odd_var(v)) else coeff
                _normal_order(swapped, s, out)
            return
    xs = [sym[1] for sym in word if sym[0] == "x"]
    ds = [sym[1] for sym in word if sym[0] == "d"]
    sign = 1
    mo_sign, mo = _sort_odd([v for v in xs if is_odd_var(v)])
    if mo_sign == 0:
        return
    do_sign, do = _sort_odd([v for v in ds if is_odd_var(v)])
    if do_sign == 0:
        return
    sign = mo_sign * do_sign
    me = tuple(sorted(v for v in xs if not is_odd_var(v)))
    de = tuple(sorted(v for v in ds if not is_odd_var(v)))
    key = (me, mo, do, de)
    new = out.get(key, Fraction(0)) + sign * coeff
    if new:
        out[key] = new
    else:
        out.pop(key, None)


class FormalOperator:
    """A finite family of normal-ordered terms, materialized per level bound."""

    def __init__(self, builder: Callable[[int], List[NFTerm]], name: str = "",
                 shift: int = 0):
        self._builder = builder
        self._cache: Dict[int, List[NFTerm]] = {}
        self.name = name
        self.shift = shift  # max level increase mult-side vs deriv-side

    def terms(self, lmax: int) -> List[NFTerm]:
        if lmax not in self._cache:
            self._cache[lmax] = [t for t in self._builder(lmax) if t is not None]
        return self._cache[lmax]

    def apply(self, poly: GrassmannPolynomial,
              lmax: Optional[int] = None) -> GrassmannPolynomial:
        if lmax is None:
            lmax = poly.max_level() + abs(self.shift) + 2
        out = GrassmannPolynomial()
        for term in self.terms(lmax):
            for key, c in poly.terms.items():
                sign, new_key, factor = term.apply_to(key)
                if sign:
                    out.add_term(new_key, factor * c)
        return out

    def __repr__(self):
        return f"FormalOperator({self.name})"


# -- the printed operators ---------------------------------------------------


def build_L(k: int, chi: Fraction, genus: int) -> FormalOperator:
    """Virasoro operator L_k for a target with chi(X^*) = chi, k >= -1.

    The harmonic-sum coefficients are realized as derivatives of Pochhammer
    polynomials, which extends them to l = 0 without dividing by zero.
    """
    if k < -1:
        raise DomainError("Virasoro operators start at k = -1")
    chi = Fraction(chi)

    def builder(lmax: int) -> List[Optional[NFTerm]]:
        terms: List[Optional[NFTerm]] = []
        if k == -1:
            terms.append(_term(-1, de=[var(T0, 0, 0)]))
            for l in range(lmax + 1):
                terms.append(_term(1, me=[var(T0, 0, l + 1)], de=[var(T0, 0, l)]))
                terms.append(_term(1, me=[var(T1, 0, l + 1)], de=[var(T1, 0, l)]))
                for i in range(1, genus + 1):
                    terms.append(_term(1, mo=[var(S, i, l + 1)], do=[var(S, i, l)]))
                    terms.append(_term(1, mo=[var(SBAR, i, l + 1)], do=[var(SBAR, i, l)]))
            terms.append(_term(1, me=[var(T0, 0, 0), var(T1, 0, 0)]))
            for i in range(1, genus + 1):
                terms.append(_term(1, mo=[var(S, i, 0), var(SBAR, i, 0)]))
            return terms
        # k >= 0: uniform shape; L_0 keeps its printed constant term
        terms.append(_term(-math.factorial(k + 1), de=[var(T0, 0, k + 1)]))
        terms.append(_term(-chi * pochhammer_deriv(1, k + 1), de=[var(T1, 0, k)]))
        for l in range(lmax + 1):
            terms.append(_term(pochhammer(l, k + 1),
                               me=[var(T0, 0, l)], de=[var(T0, 0, k + l)]))
            terms.append(_term(pochhammer(l + 1, k + 1),
                               me=[var(T1, 0, l)], de=[var(T1, 0, k + l)]))
            for i in range(1, genus + 1):
                terms.append(_term(pochhammer(l + 1, k + 1),
                                   mo=[var(S, i, l)], do=[var(S, i, k + l)]))
                terms.append(_term(pochhammer(l, k + 1),
                                   mo=[var(SBAR, i, l)], do=[var(SBAR, i, k + l)]))
            if k + l - 1 >= 0:
                terms.append(_term(chi * pochhammer_deriv(l, k + 1),
                                   me=[var(T0, 0, l)], de=[var(T1, 0, k + l - 1)]))
        for l in range(0, k - 1):
            terms.append(_term(chi / 2 * math.factorial(l + 1) * math.factorial(k - l - 1),
                               de=[var(T1, 0, l), var(T1, 0, k - l - 2)]))
        if k == 0:
            terms.append(_term(chi / 2, me=[var(T0, 0, 0), var(T0, 0, 0)]))
        return terms

    return FormalOperator(builder, name=f"L_{k}", shift=max(1, -k))


def build_D(i: int, k: int, barred: bool, genus: int) -> FormalOperator:
    """Odd constraint operator D^i_k (or the barred variant), k >= -1."""
    if k < -1:
        raise DomainError("odd operators start at k = -1")
    if not (1 <= i <= genus):
        raise DomainError(f"odd family index {i} out of range for genus {genus}")
    own, other = (S, SBAR) if not barred else (SBAR, S)
    last_sign = 1 if not barred else -1

    def builder(lmax: int) -> List[Optional[NFTerm]]:
        terms: List[Optional[NFTerm]] = []
        terms.append(_term(-math.factorial(k + 1), do=[var(own, i, k + 1)]))
        for l in range(lmax + 1):
            if k + l >= 0:
                terms.append(_term(pochhammer(l, k + 1),
                                   me=[var(T0, 0, l)], do=[var(own, i, k + l)]))
                terms.append(_term(last_sign * pochhammer(l + 1, k + 1),
                                   mo=[var(other, i, l)], de=[var(T1, 0, k + l)]))
        if k == -1:
            # constant term forced by [L_{-1}, D_0] = -D_{-1} and by
            # annihilation of the generating series (odd analogue of the
            # printed constant in L_{-1})
            terms.append(_term(last_sign, me=[var(T0, 0, 0)], mo=[var(other, i, 0)]))
        return terms

    name = ("Dbar" if barred else "D") + f"^{i}_{k}"
    return FormalOperator(builder, name=name, shift=max(1, -k))


# -- exact operator composition ----------------------------------------------


def compose_terms(t1: NFTerm, t2: NFTerm, out: Dict[Tuple, Fraction],
                  scale: Fraction = Fraction(1)) -> None:
    _normal_order(t1.word() + t2.word(), scale * t1.coeff * t2.coeff, out)


def _bracket_terms(A: FormalOperator, B: FormalOperator, lmax: int,
                   anti: bool) -> Dict[Tuple, Fraction]:
    """Normal-ordered terms of [A, B] (or {A, B}) on the materialization.

    Pairs with no possible contraction (anti)commute exactly and are
    skipped: for even-even or even-odd pairs the products cancel in the
    commutator, for odd-odd pairs they cancel in the anticommutator.
    """
    out: Dict[Tuple, Fraction] = {}
    terms_a = A.terms(lmax)
    terms_b = B.terms(lmax)
    sets_a = [(t, frozenset(t.deriv_vars()), frozenset(t.mult_vars())) for t in terms_a]
    sets_b = [(t, frozenset(t.deriv_vars()), frozenset(t.mult_vars())) for t in terms_b]
    sign2 = Fraction(1) if anti else Fraction(-1)
    for ta, da, ma in sets_a:
        for tb, db, mb in sets_b:
            if not (da & mb) and not (db & ma):
                continue
            compose_terms(ta, tb, out)
            compose_terms(tb, ta, out, scale=sign2)
    return out


def _restrict_levels(terms: Dict[Tuple, Fraction], level_cap: int) -> Dict[Tuple, Fraction]:
    out = {}
    for key, c in terms.items():
        me, mo, do, de = key
        if all(v[2] <= level_cap for v in do + de):
            out[key] = c
    return out


def commutator_residual(A: FormalOperator, B: FormalOperator,
                        expected: Optional[FormalOperator], level_cap: int,
                        anti: bool = False,
                        expected_scale: Fraction = Fraction(1)) -> GrassmannPolynomial:
    """([A,B] - expected) as a polynomial witness; zero iff the identity
    holds on every monomial whose variable levels are at most level_cap.

    The bracket is computed by exact normal-ordered composition; the
    residual terms whose derivative levels exceed level_cap are not fully
    determined by the materialization and are excluded (they cannot act on
    monomials inside the cutoff).
    """
    lmax = level_cap + 8
    residual = _bracket_terms(A, B, lmax, anti)
    if expected is not None:
        for t in expected.terms(lmax):
            key = (t.me, t.mo, t.do, t.de)
            new = residual.get(key, Fraction(0)) - expected_scale * t.coeff
            if new:
                residual[key] = new
            else:
                residual.pop(key, None)
    residual = {k: v for k, v in _restrict_levels(residual, level_cap).items() if v}
    if not residual:
        return GrassmannPolynomial()
    # nonzero: exhibit the action on a witness monomial inside the cutoff
    for key in residual:
        witness = GrassmannPolynomial.monomial(key[3], key[2])
        lhs = A.apply(B.apply(witness)) + (
            B.apply(A.apply(witness)) if anti else
            B.apply(A.apply(witness)).scale(-1))
        if expected is not None:
            lhs = lhs - expected.apply(witness).scale(expected_scale)
        if not lhs.is_zero():
            return lhs
    # diagnostic fallback: report the leading residual coefficient
    return GrassmannPolynomial.constant(next(iter(residual.values())))


# -- constraint extraction ---------------------------------------------------


def _bracket_monomial(b: Bracket) -> MonKey:
    evens, odds = [], []
    for ins in b.insertions:
        v = var(_RANK_OF_KIND[ins.cls.kind], ins.cls.index, ins.level)
        (odds if is_odd_var(v) else evens).append(v)
    return monomial_key(evens, sorted(odds))


def _monomial_bracket(key: MonKey, template: Bracket) -> Bracket:
    ins = []
    for v in key[0] + key[1]:
        rank, index, level = v
        ins.append(Insertion(level, CohClass(_KIND_OF_RANK[rank], index)))
    return Bracket(template.target_genus, template.degree, tuple(ins),
                   template.profiles)


def _even_symmetry(key: MonKey) -> int:
    """prod a_v! over even variable multiplicities (Z normalization)."""
    out, run = 1, 1
    evens = key[0]
    for idx in range(1, len(evens)):
        if evens[idx] == evens[idx - 1]:
            run += 1
            out *= run
        else:
            run = 1
    return out


def extraction_coefficients(op: FormalOperator, target_key: MonKey
                            ) -> Dict[MonKey, Fraction]:
    """Coefficients c_M with (op Z)|_target = sum c_M [M] Z.

    Candidates M are produced by inverting each operator term on the target
    monomial; the coefficient is then read off by a forward application.
    """
    max_level = max([v[2] for v in target_key[0] + target_key[1]], default=0)
    lmax = max_level + abs(op.shift) + 2
    candidates: Dict[MonKey, Fraction] = {}
    target_evens = list(target_key[0])
    target_odds = list(target_key[1])
    for term in op.terms(lmax):
        # M = target - mults + derivs, when the mults are present in target
        evens, odds = list(target_evens), list(target_odds)
        ok = True
        for v in term.me:
            if v in evens:
                evens.remove(v)
            else:
                ok = False
                break
        if not ok:
            continue
        for v in term.mo:
            if v in odds:
                odds.remove(v)
            else:
                ok = False
                break
        if not ok:
            continue
        for v in term.de:
            evens.append(v)
        clash = False
        for v in term.do:
            if v in odds:
                clash = True
                break
            odds.append(v)
        if clash:
            continue
        candidates[monomial_key(evens, sorted(odds))] = Fraction(0)
    for key in list(candidates):
        image = op.apply(GrassmannPolynomial.monomial(*key), lmax=lmax)
        candidates[key] = image.coefficient(target_key)
    return {k: c for k, c in candidates.items() if c}


def constraint_identity(k: int, target: Bracket) -> BracketSum:
    """Rewrite target (containing tau_{k+1}(1)) via the L_k constraint.

    Extracts the coefficient of the target monomial divided by t0_{k+1}
    from L_k Z = 0 and solves for the target bracket.  The result is a
    bracket sum whose evaluation equals the target's.
    """
    sign, canon = normalize(target)
    out = BracketSum()
    if sign == 0:
        return out
    slot = None
    for ins in canon.insertions:
        if ins.cls.kind == IDENTITY and ins.level == k + 1:
            slot = ins
            break
    if slot is None:
        raise DomainError(f"target has no tau_{k + 1}(1) insertion")
    remaining = list(canon.insertions)
    remaining.remove(slot)
    reduced = Bracket(canon.target_genus, canon.degree, tuple(remaining),
                      canon.profiles)
    mprime = _bracket_monomial(reduced)
    op = build_L(k, Fraction(canon.euler), canon.target_genus)
    coeffs = extraction_coefficients(op, mprime)
    target_key = _bracket_monomial(canon)
    c_target = coeffs.pop(target_key, Fraction(0))
    if c_target == 0:
        raise DomainError("degenerate extraction: target coefficient vanished")
    scale = Fraction(-_even_symmetry(target_key), 1) / c_target
    for key, c in coeffs.items():
        b = _monomial_bracket(key, canon)
        out.add(sign * scale * c / _even_symmetry(key), b)
    return out


def eliminate_tau1(b: Bracket, chooser: Optional[Callable[[Bracket], int]] = None
                   ) -> BracketSum:
    """Repeatedly remove identity descendents; result has none left.

    The default strategy removes the highest-level identity insertion; a
    chooser (bracket -> level of some identity insertion) can override it,
    which the confluence tests exploit.
    """
    out = BracketSum()
    sign, canon = normalize(b)
    if sign == 0:
        return out
    levels = [ins.level for ins in canon.insertions if ins.cls.kind == IDENTITY]
    if not levels:
        out.add(Fraction(sign), canon)
        return out
    level = max(levels) if chooser is None else chooser(canon)
    step = constraint_identity(level - 1, canon)
    for term, coeff in step.items():
        out.extend(eliminate_tau1(term, chooser), scale=sign * coeff)
    return out


# -- reaction table fast path --------------------------------------------------


def reaction_reduce(k: int, rest: Sequence[Insertion], chi: Fraction,
                    template: Bracket) -> BracketSum:
    """The five printed decay reactions for removing tau_k(1), k >= 1.

    Valid for even-only insertion lists; the constant terms of L_{-1} and
    L_0 never fire here because k >= 1.  Cross-checked against mechanical
    extraction in the tests.
    """
    if k < 1:
        raise DomainError("the reaction table applies for k >= 1")
    if any(ins.cls.is_odd for ins in rest):
        raise DomainError("reaction table is even-only; use constraint_identity")
    chi = Fraction(chi)
    out = BracketSum()
    rest = list(rest)

    def emit(coeff: Fraction, replaced: Dict[int, Insertion], extra: List[Insertion]):
        ins = [replaced.get(idx, cur) for idx, cur in enumerate(rest)]
        out.add(coeff, Bracket(template.target_genus, template.degree,
                               tuple(ins) + tuple(extra), template.profiles))

    for idx, ins in enumerate(rest):
        l = ins.level
        if ins.cls.kind == IDENTITY:
            # (i) 1 + 1 -> 1
            if k + l - 1 >= 0:
                emit(binomial(k + l - 1, k),
                     {idx: Insertion(k + l - 1, CohClass(IDENTITY))}, [])
            # (ii) 1 + 1 -> omega, harmonic sum as a derivative in l
            if k + l - 2 >= 0:
                emit(chi * binomial_deriv(k + l - 1, k),
                     {idx: Insertion(k + l - 2, CohClass(OMEGA))}, [])
        elif ins.cls.kind == OMEGA:
            # (iii) 1 + omega -> omega
            emit(binomial(k + l, k), {idx: Insertion(k + l - 1, CohClass(OMEGA))}, [])
    # (iv) 1 -> omega
    if k - 1 >= 0:
        emit(-chi * harmonic(1, k), {}, [Insertion(k - 1, CohClass(OMEGA))])
    # (v) 1 -> omega + omega
    for i in range(0, k - 2):
        emit(chi / (2 * k) / binomial(k - 1, i + 1), {},
             [Insertion(i, CohClass(OMEGA)), Insertion(k - i - 3, CohClass(OMEGA))])
    return out


# -- constraint vanishing sweep ------------------------------------------------


def z_monomials(genus: int, max_level: int, max_degree: int,
                with_odd: bool = True) -> List[MonKey]:
    """All monomials with total level <= max_level, degree <= max_degree."""
    evens = [var(r, 0, l) for r in (T0, T1) for l in range(max_level + 1)]
    odds = [var(r, i, l) for r in (S, SBAR) for i in range(1, genus + 1)
            for l in range(max_level + 1)] if with_odd else []
    out: List[MonKey] = []

    def rec(pool: List[Var], start: int, chosen: List[Var], budget: int,
            slots: int, allow_repeat: bool):
        yield tuple(chosen)
        if slots == 0:
            return
        for idx in range(start, len(pool)):
            v = pool[idx]
            if v[2] > budget:
                continue
            chosen.append(v)
            yield from rec(pool, idx if allow_repeat else idx + 1, chosen,
                           budget - v[2], slots - 1, allow_repeat)
            chosen.pop()

    for even_part in rec(evens, 0, [], max_level, max_degree, True):
        lev = sum(v[2] for v in even_part)
        deg = len(even_part)
        for odd_part in rec(odds, 0, [], max_level - lev, max_degree - deg, False):
            out.append(monomial_key(even_part, sorted(odd_part)))
    return out


def constraint_residual(k: int, template: Bracket, mon: MonKey,
                        evaluator) -> Fraction:
    """(L_k Z)|_mon computed with bracket values from `evaluator`."""
    op = build_L(k, Fraction(template.euler), template.target_genus)
    total = Fraction(0)
    for key, c in extraction_coefficients(op, mon).items():
        b = _monomial_bracket(key, template)
        total += c * evaluator(b) / _even_symmetry(key)
    return total
