"""Exact rational arithmetic and truncated formal series.

Everything downstream (character sums, operator matrices, Virasoro
coefficients) runs on `fractions.Fraction`; no floating point is used
anywhere.  The series type is a sparse multivariate Laurent series with a
per-variable *precision*: exponent vectors whose entries are all below the
precision are carried exactly, everything else is discarded.  Precision is
propagated soundly through products (a factor with negative exponents eats
into the window of the other factor), so a retained coefficient always
equals the coefficient of the untruncated product.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Rational = Fraction
Scalar = Union[Fraction, int]


class ConfigurationError(ValueError):
    """Incompatible variables or precision windows."""


class DomainError(ValueError):
    """Operation applied outside its mathematical domain."""


class PrecisionError(ValueError):
    """A coefficient outside the trusted window was requested."""


def rational_str(x: Scalar) -> str:
    """Canonical "p/q" form, "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _min_prec(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(p: Optional[int], q: Optional[int]) -> Optional[int]:
    if p is None or q is None:
        return None
    return p + q


class TruncatedSeries:
    """Sparse exact series in an ordered tuple of variables.

    ``prec[v]`` is the first untrusted exponent of variable ``v`` (``None``
    for exact).  Stored terms all satisfy ``e[v] < prec[v]``; exponents may
    be negative (Laurent directions), and there is no stored lower bound:
    absent low-order terms are genuinely zero.
    """

    __slots__ = ("variables", "prec", "terms")

    def __init__(self, variables: Sequence[str],
                 terms: Mapping[tuple, Scalar] | None = None,
                 prec: Sequence[Optional[int]] | None = None):
        self.variables = tuple(variables)
        self.prec = tuple(prec) if prec is not None else (None,) * len(self.variables)
        if len(self.prec) != len(self.variables):
            raise ConfigurationError("prec/variables length mismatch")
        self.terms: dict = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c == 0 or not self._trusted(e):
                    continue
                self.terms[tuple(e)] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar,
                 prec: Sequence[Optional[int]] | None = None) -> "TruncatedSeries":
        zero = (0,) * len(variables)
        return cls(variables, {zero: Fraction(value)}, prec)

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int],
                 coeff: Scalar = 1,
                 prec: Sequence[Optional[int]] | None = None) -> "TruncatedSeries":
        return cls(variables, {tuple(exps): Fraction(coeff)}, prec)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str,
                 prec: Sequence[Optional[int]] | None = None) -> "TruncatedSeries":
        e = [0] * len(variables)
        e[list(variables).index(name)] = 1
        return cls.monomial(variables, e, 1, prec)

    # -- bookkeeping -------------------------------------------------------

    def _trusted(self, e: Sequence[int]) -> bool:
        return all(p is None or x < p for x, p in zip(e, self.prec))

    def _known_ord(self) -> tuple:
        """Per-variable minimum exponent of the support (prec for 0)."""
        if not self.terms:
            return self.prec
        mins = [min(e[i] for e in self.terms) for i in range(len(self.variables))]
        return tuple(mins)

    def _check_compatible(self, other: "TruncatedSeries") -> None:
        if self.variables != other.variables:
            raise ConfigurationError(
                f"variable mismatch: {self.variables} vs {other.variables}")

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        e = tuple(exps)
        if not self._trusted(e):
            raise PrecisionError(f"coefficient {e} outside trusted window {self.prec}")
        return self.terms.get(e, Fraction(0))

    def truncate(self, prec: Sequence[Optional[int]]) -> "TruncatedSeries":
        new_prec = tuple(_min_prec(p, q) for p, q in zip(self.prec, prec))
        return TruncatedSeries(self.variables, self.terms, new_prec)

    def extend(self, variables: Sequence[str]) -> "TruncatedSeries":
        """Embed into a larger variable tuple (new variables exact)."""
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(variables)}
        idx = [pos[v] for v in self.variables]
        prec: list = [None] * len(variables)
        for i, p in zip(idx, self.prec):
            prec[i] = p
        terms = {}
        for e, c in self.terms.items():
            new_e = [0] * len(variables)
            for i, x in zip(idx, e):
                new_e[i] = x
            terms[tuple(new_e)] = c
        return TruncatedSeries(variables, terms, prec)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check_compatible(other)
            return other
        return TruncatedSeries.constant(self.variables, other)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        prec = tuple(_min_prec(p, q) for p, q in zip(self.prec, other.prec))
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncatedSeries(self.variables, out, prec)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "TruncatedSeries":
        out = TruncatedSeries(self.variables, {}, self.prec)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            out = TruncatedSeries(self.variables, {}, self.prec)
            if c:
                out.terms = {e: v * c for e, v in self.terms.items()}
            return out
        self._check_compatible(other)
        ord_a, ord_b = self._known_ord(), other._known_ord()
        prec = tuple(_min_prec(_add_prec(pa, ob), _add_prec(pb, oa))
                     for pa, pb, oa, ob in zip(self.prec, other.prec, ord_a, ord_b))
        out: dict = {}
        nvars = len(self.variables)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(e1[i] + e2[i] for i in range(nvars))
                if not all(p is None or x < p for x, p in zip(e, prec)):
                    continue
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        result = TruncatedSeries(self.variables, {}, prec)
        result.terms = out
        return result

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise DomainError("negative powers need an explicit inverse construction")
        result = TruncatedSeries.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.variables == other.variables and self.prec == other.prec
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, self.prec, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return f"TruncatedSeries({self.variables}, 0, prec={self.prec})"
        bits = []
        for e in sorted(self.terms):
            mono = "*".join(f"{v}^{x}" for v, x in zip(self.variables, e) if x)
            bits.append(f"({rational_str(self.terms[e])}){'*' + mono if mono else ''}")
        return " + ".join(bits)


def series_multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Exact truncated product (precision window propagated)."""
    return a * b


def _nilpotent_sum(f: TruncatedSeries, coeff_of_power) -> TruncatedSeries:
    """Sum c_n f^n for n >= 1, terminating when f^n truncates to zero."""
    acc = TruncatedSeries(f.variables, {}, f.prec)
    power = f
    n = 1
    while not power.is_zero():
        acc = acc + power * coeff_of_power(n)
        n += 1
        if n > 10000:
            raise DomainError("series argument is not topologically nilpotent")
        power = power * f
    return acc


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term."""
    if a.coefficient((0,) * len(a.variables)) != 0:
        raise DomainError("exp needs zero constant term")
    facts = [Fraction(1)]

    def c(n: int) -> Fraction:
        while len(facts) <= n:
            facts.append(facts[-1] / len(facts))
        return facts[n]

    return TruncatedSeries.constant(a.variables, 1, a.prec) + _nilpotent_sum(a, c)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term 1 (Mercator sum in a - 1)."""
    if a.coefficient((0,) * len(a.variables)) != 1:
        raise DomainError("log needs constant term 1")
    u = a - 1
    return _nilpotent_sum(u, lambda n: Fraction((-1) ** (n + 1), n))


def series_power(a: TruncatedSeries, exponent: TruncatedSeries) -> TruncatedSeries:
    """a**exponent = exp(exponent * log a); a must have constant term 1."""
    return series_exp(exponent * series_log(a))


def series_inv_one_plus(u: TruncatedSeries) -> TruncatedSeries:
    """1/(1+u) as a geometric sum; u must be topologically nilpotent."""
    return TruncatedSeries.constant(u.variables, 1, u.prec) + \
        _nilpotent_sum(u, lambda n: Fraction((-1) ** n))


def series_exp_log(a: TruncatedSeries, mode: str,
                   exponent: TruncatedSeries | None = None) -> TruncatedSeries:
    """Dispatcher: mode is "exp", "log" or "power" (with an exponent series)."""
    if mode == "exp":
        return series_exp(a)
    if mode == "log":
        return series_log(a)
    if mode == "power":
        if exponent is None:
            raise ConfigurationError("power mode needs an exponent series")
        return series_power(a, exponent)
    raise ConfigurationError(f"unknown mode {mode!r}")


def c_coefficients(n: int) -> list:
    """Coefficients c_0..c_n of (z/2)/sinh(z/2).

    Solved term by term from sinh(z/2) * C(z) = z/2.  Odd coefficients
    vanish; c_0 = 1, c_2 = -1/24, c_4 = 7/5760.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    # sinh(z/2) = sum over odd j of (1/2)^j z^j / j!
    sinh = {}
    fact = 1
    for j in range(1, n + 2):
        fact *= j
        if j % 2 == 1:
            sinh[j] = Fraction(1, 2 ** j * fact)
    cs = []
    for m in range(n + 1):
        # coefficient of z^{m+1} in sinh(z/2)*C(z) equals delta_{m,0} * 1/2
        rhs = Fraction(1, 2) if m == 0 else Fraction(0)
        acc = rhs
        for j, s in sinh.items():
            if 3 <= j <= m + 1:
                acc -= s * cs[m + 1 - j]
        cs.append(acc / sinh[1])
    return cs


def pochhammer(a: Scalar, b: int) -> Fraction:
    """Rising factorial a(a+1)...(a+b-1); empty product for b = 0."""
    if b < 0:
        raise DomainError("pochhammer needs b >= 0")
    out = Fraction(1)
    a = Fraction(a)
    for j in range(b):
        out *= a + j
    return out


def pochhammer_coeffs(b: int) -> list:
    """Coefficients of the degree-b polynomial (a)_b in the symbol a."""
    if b < 0:
        raise DomainError("pochhammer needs b >= 0")
    poly = [Fraction(1)]
    for j in range(b):
        shifted = [Fraction(0)] + poly
        poly = [c * j for c in poly] + [Fraction(0)]
        poly = [p + q for p, q in zip(poly, shifted)]
    return poly


def pochhammer_deriv(a0: Scalar, b: int) -> Fraction:
    """d/da (a)_b evaluated at a = a0, by the product rule.

    At a0 = 0 this equals (b-1)!, the value the harmonic-sum reading
    0 * (sum 1/r) of the logarithmic derivative cannot produce directly.
    """
    if b < 0:
        raise DomainError("pochhammer needs b >= 0")
    a0 = Fraction(a0)
    total = Fraction(0)
    for i in range(b):
        prod = Fraction(1)
        for j in range(b):
            if j != i:
                prod *= a0 + j
        total += prod
    return total


def binomial(n: Scalar, k: int) -> Fraction:
    """binom(n, k) = n(n-1)...(n-k+1)/k! for any rational n, integer k >= 0."""
    if k < 0:
        return Fraction(0)
    num = Fraction(1)
    n = Fraction(n)
    for i in range(k):
        num *= n - i
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return num / fact


def binomial_deriv(l0: Scalar, k: int) -> Fraction:
    """d/dl binom(l, k) at l = l0, via the product rule on l(l-1)...(l-k+1)/k!."""
    if k < 0:
        return Fraction(0)
    l0 = Fraction(l0)
    total = Fraction(0)
    for i in range(k):
        prod = Fraction(1)
        for j in range(k):
            if j != i:
                prod *= l0 - j
        total += prod
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return total / fact


def binomial_poly(l0: Scalar, k: int, mode: str = "value") -> Fraction:
    """binom(l, k) as a polynomial in l: value or l-derivative at l0."""
    if mode == "value":
        return binomial(l0, k)
    if mode == "derivative":
        return binomial_deriv(l0, k)
    raise ConfigurationError(f"unknown mode {mode!r}")


def harmonic(a: int, b: int) -> Fraction:
    """Sum of 1/r for a <= r <= b (empty sum when a > b); requires a >= 1."""
    if a < 1:
        raise DomainError("harmonic sum would divide by zero")
    return sum((Fraction(1, r) for r in range(a, b + 1)), Fraction(0))


def multinomial(parts: Iterable[int]) -> int:
    """(sum parts)! / prod(part!)."""
    parts = list(parts)
    if any(p < 0 for p in parts):
        return 0
    total, out = 0, 1
    for p in parts:
        for i in range(1, p + 1):
            total += 1
            out = out * total // i
    return out
