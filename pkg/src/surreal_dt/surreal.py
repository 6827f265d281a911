"""Exact surreal numbers in finite-support Conway normal form.

A value is a finite sum ``c_1 w^e_1 + ... + c_n w^e_n`` with nonzero
rational coefficients and strictly decreasing exponents, where each exponent
is itself a value of the same kind.  This subfield of No is closed under
addition, negation, multiplication and comparison, and holds every number
that shows up in a finite surreal decision problem: reals-as-rationals,
``w``, ``1/w``, ``w - 1``, ``w^2``, ``w^(w^k)`` and so on.

Multiplicative inverses exist in No for every nonzero value but typically have
infinite support (``1/(w + 1) = w^-1 - w^-2 + ...``), so division is exact
long division that either terminates or raises `ExactQuotientUnavailable`.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import functools
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Union

__all__ = [
    "Surreal",
    "Classification",
    "SurrealError",
    "DepthExceeded",
    "ExactQuotientUnavailable",
    "InfiniteArgument",
    "MalformedCut",
    "NonRealBound",
    "ZERO",
    "as_surreal",
    "ONE",
    "OMEGA",
    "DEFAULT_DEPTH_LIMIT",
    "DEFAULT_TERM_BUDGET",
    "depth_limit",
    "get_depth_limit",
    "from_rational",
    "omega_power",
    "omega_k",
    "compare",
    "add",
    "neg",
    "sub",
    "mul",
    "recip_exact",
    "div",
    "div_truncated",
    "classify",
    "standard_part",
    "simplest_between",
]

DEFAULT_DEPTH_LIMIT = 8
DEFAULT_TERM_BUDGET = 64

_depth_limit: contextvars.ContextVar[int] = contextvars.ContextVar(
    "surreal_depth_limit", default=DEFAULT_DEPTH_LIMIT
)


class SurrealError(Exception):
    """Base class for errors raised by surreal arithmetic."""


class DepthExceeded(SurrealError):
    """Exponent nesting went past the configured bound."""

    def __init__(self, depth: int, limit: int):
        super().__init__(f"exponent nesting depth {depth} exceeds limit {limit}")
        self.depth = depth
        self.limit = limit


class ExactQuotientUnavailable(SurrealError, ArithmeticError):
    """Long division did not terminate within the term budget.

    ``quotient`` holds the terms produced so far and ``remainder`` what was
    left over, so ``numerator == quotient * divisor + remainder``.
    """

    def __init__(self, numerator, divisor, quotient, remainder, budget):
        super().__init__(
            f"({numerator}) / ({divisor}) has no finite normal form within "
            f"{budget} terms (remainder {remainder})"
        )
        self.numerator = numerator
        self.divisor = divisor
        self.quotient = quotient
        self.remainder = remainder
        self.budget = budget


class InfiniteArgument(SurrealError, ValueError):
    """A finite value was required but an infinite one was given."""


class MalformedCut(SurrealError, ValueError):
    """Some left option is >= some right option."""


class NonRealBound(SurrealError, ValueError):
    """A cut bound is not a real (pure w^0) value."""


def get_depth_limit() -> int:
    return _depth_limit.get()


@contextlib.contextmanager
def depth_limit(limit: int) -> Iterator[int]:
    """Temporarily change the exponent nesting bound for the current context."""
    if limit < 1:
        raise ValueError("depth limit must be positive")
    token = _depth_limit.set(limit)
    try:
        yield limit
    finally:
        _depth_limit.reset(token)


class Classification(enum.Enum):
    ZERO = "Zero"
    POSITIVE_INFINITE = "PositiveInfinite"
    NEGATIVE_INFINITE = "NegativeInfinite"
    FINITE_APPRECIABLE = "FiniteAppreciable"
    INFINITESIMAL = "Infinitesimal"

    def __str__(self) -> str:
        return self.value


SurrealLike = Union["Surreal", int, Fraction, str]


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


class Surreal:
    """An immutable surreal number in finite normal form.

    Construct from an ``int``, a ``Fraction``, a decimal or fraction string,
    or another ``Surreal``.  Floats are rejected since they are not exact
    decimals.  Use `omega_power` and the arithmetic operators for the rest,
    or `surreal_dt.literal.parse` for the text grammar.
    """

    __slots__ = ("_terms", "_hash", "_depth")

    def __init__(self, value: SurrealLike = 0):
        if isinstance(value, Surreal):
            terms = value._terms
        else:
            q = _to_fraction(value)
            terms = ((ZERO, q),) if q else ()
        self._terms: tuple[tuple[Surreal, Fraction], ...] = terms
        self._hash: int | None = None
        self._depth: int | None = None

    @classmethod
    def _make(cls, terms: tuple[tuple[Surreal, Fraction], ...]) -> Surreal:
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        obj._depth = None
        return obj

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[SurrealLike, SurrealLike]]) -> Surreal:
        """Build ``sum(coeff * w^exp)`` from arbitrary (exponent, coefficient) pairs.

        Pairs may come in any order and may repeat exponents; the result is
        canonicalized.
        """
        acc: dict[Surreal, Fraction] = {}
        for e, c in terms:
            e = as_surreal(e)
            c = _to_fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        return _from_dict(acc)

    @property
    def terms(self) -> tuple[tuple[Surreal, Fraction], ...]:
        """(exponent, coefficient) pairs, exponents strictly decreasing."""
        return self._terms

    @property
    def depth(self) -> int:
        """Exponent nesting depth: 0 for zero, 1 for rationals, 2 for ``w``."""
        if self._depth is None:
            self._depth = 1 + max((e.depth for e, _ in self._terms), default=-1)
        return self._depth

    @property
    def leading_exponent(self) -> Surreal:
        if not self._terms:
            raise ValueError("zero has no leading term")
        return self._terms[0][0]

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            raise ValueError("zero has no leading term")
        return self._terms[0][1]

    def is_real(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not self._terms[0][0]._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integer(self) -> bool:
        return self.is_real() and self.to_fraction().denominator == 1

    def to_fraction(self) -> Fraction:
        """The rational value of a real surreal; `NonRealBound` otherwise."""
        if not self._terms:
            return Fraction(0)
        if not self.is_real():
            raise NonRealBound(f"{self} is not a real number")
        return self._terms[0][1]

    def sign(self) -> int:
        return _sign(self._terms[0][1]) if self._terms else 0

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_real():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash(self._terms)
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Surreal):
            return self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self.is_real() and self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: SurrealLike) -> bool:
        return compare(self, as_surreal(other)) < 0

    def __le__(self, other: SurrealLike) -> bool:
        return compare(self, as_surreal(other)) <= 0

    def __gt__(self, other: SurrealLike) -> bool:
        return compare(self, as_surreal(other)) > 0

    def __ge__(self, other: SurrealLike) -> bool:
        return compare(self, as_surreal(other)) >= 0

    def __add__(self, other: SurrealLike) -> Surreal:
        try:
            return add(self, as_surreal(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: SurrealLike) -> Surreal:
        try:
            return sub(self, as_surreal(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: SurrealLike) -> Surreal:
        try:
            return sub(as_surreal(other), self)
        except TypeError:
            return NotImplemented

    def __neg__(self) -> Surreal:
        return neg(self)

    def __pos__(self) -> Surreal:
        return self

    def __abs__(self) -> Surreal:
        return neg(self) if self.sign() < 0 else self

    def __mul__(self, other: SurrealLike) -> Surreal:
        try:
            return mul(self, as_surreal(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: SurrealLike) -> Surreal:
        try:
            other = as_surreal(other)
        except TypeError:
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other: SurrealLike) -> Surreal:
        try:
            other = as_surreal(other)
        except TypeError:
            return NotImplemented
        return div(other, self)

    def __pow__(self, n: int) -> Surreal:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return recip_exact(self ** -n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            base = mul(base, base) if n > 1 else base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"Surreal('{self}')"

    def __str__(self) -> str:
        from surreal_dt.literal import format_surreal

        return format_surreal(self)


def _to_fraction(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("bool is not a number here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Surreal):
        return value.to_fraction()
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_surreal(value: SurrealLike) -> Surreal:
    """Coerce an int, Fraction, literal string or Surreal to a Surreal."""
    if isinstance(value, Surreal):
        return value
    if isinstance(value, str):
        from surreal_dt.literal import parse

        return parse(value)
    return from_rational(_to_fraction(value))


ZERO = Surreal._make(())
ONE = Surreal._make(((ZERO, Fraction(1)),))
OMEGA = Surreal._make(((ONE, Fraction(1)),))


def _from_dict(acc: dict[Surreal, Fraction]) -> Surreal:
    items = [(e, c) for e, c in acc.items() if c]
    items.sort(key=functools.cmp_to_key(lambda x, y: compare(y[0], x[0])))
    return Surreal._make(tuple(items))


def _check_depth(x: Surreal) -> Surreal:
    limit = _depth_limit.get()
    if x.depth > limit:
        raise DepthExceeded(x.depth, limit)
    return x


def from_rational(q: Fraction | int) -> Surreal:
    """Embed a rational as the single term ``q w^0`` (zero is empty)."""
    q = _to_fraction(q)
    return Surreal._make(((ZERO, q),)) if q else ZERO


def omega_power(e: SurrealLike) -> Surreal:
    """The monomial ``w^e``."""
    e = as_surreal(e)
    return _check_depth(Surreal._make(((e, Fraction(1)),)))


def omega_k(k: int) -> Surreal:
    """``w_k``, read as ``w^(w^k)``; ``w_0`` is ``w``."""
    return omega_power(omega_power(k))


def compare(a: Surreal, b: Surreal) -> int:
    """Three-way comparison: -1, 0 or 1.

    Scans both term lists in parallel; the first position where they differ
    is the leading term of ``a - b`` and its coefficient sign decides.
    """
    ta, tb = a._terms, b._terms
    na, nb = len(ta), len(tb)
    i = 0
    while True:
        if i == na:
            return 0 if i == nb else -_sign(tb[i][1])
        if i == nb:
            return _sign(ta[i][1])
        ea, ca = ta[i]
        eb, cb = tb[i]
        if ea is not eb and ea != eb:
            return _sign(ca) if compare(ea, eb) > 0 else -_sign(cb)
        if ca != cb:
            return 1 if ca > cb else -1
        i += 1


def add(a: Surreal, b: Surreal) -> Surreal:
    ta, tb = a._terms, b._terms
    if not ta:
        return b
    if not tb:
        return a
    out = []
    i = j = 0
    na, nb = len(ta), len(tb)
    while i < na and j < nb:
        ea, ca = ta[i]
        eb, cb = tb[j]
        if ea == eb:
            s = ca + cb
            if s:
                out.append((ea, s))
            i += 1
            j += 1
        elif compare(ea, eb) > 0:
            out.append(ta[i])
            i += 1
        else:
            out.append(tb[j])
            j += 1
    out.extend(ta[i:])
    out.extend(tb[j:])
    return Surreal._make(tuple(out))


def neg(a: Surreal) -> Surreal:
    return Surreal._make(tuple((e, -c) for e, c in a._terms))


def sub(a: Surreal, b: Surreal) -> Surreal:
    return add(a, neg(b))


def mul(a: Surreal, b: Surreal) -> Surreal:
    """Term convolution using ``w^x * w^y = w^(x+y)``."""
    ta, tb = a._terms, b._terms
    if not ta or not tb:
        return ZERO
    if len(tb) == 1 and not tb[0][0]._terms:
        q = tb[0][1]
        return a if q == 1 else Surreal._make(tuple((e, c * q) for e, c in ta))
    if len(ta) == 1 and not ta[0][0]._terms:
        q = ta[0][1]
        return b if q == 1 else Surreal._make(tuple((e, c * q) for e, c in tb))
    acc: dict[Surreal, Fraction] = {}
    for ea, ca in ta:
        for eb, cb in tb:
            e = add(ea, eb)
            acc[e] = acc.get(e, Fraction(0)) + ca * cb
    return _check_depth(_from_dict(acc))


def _long_divide(a: Surreal, b: Surreal, budget: int) -> tuple[Surreal, Surreal]:
    """Return (quotient, remainder) after at most ``budget`` quotient terms."""
    if not b:
        raise ZeroDivisionError("surreal division by zero")
    if budget < 1:
        raise ValueError("term budget must be positive")
    lead_e, lead_c = b._terms[0]
    q_terms: list[tuple[Surreal, Fraction]] = []
    r = a
    while r and len(q_terms) < budget:
        re, rc = r._terms[0]
        m = Surreal._make(((sub(re, lead_e), rc / lead_c),))
        q_terms.append(m._terms[0])
        r = sub(r, mul(m, b))
    return _check_depth(Surreal._make(tuple(q_terms))), r


def div(a: Surreal, b: Surreal, term_budget: int = DEFAULT_TERM_BUDGET) -> Surreal:
    """Exact quotient ``a / b`` by long division on leading terms.

    Raises `ExactQuotientUnavailable` if the remainder is still nonzero after
    ``term_budget`` quotient terms.
    """
    q, r = _long_divide(a, b, term_budget)
    if r:
        raise ExactQuotientUnavailable(a, b, q, r, term_budget)
    return q


def div_truncated(a: Surreal, b: Surreal, term_budget: int) -> tuple[Surreal, bool]:
    """Quotient truncated to ``term_budget`` terms, plus an exactness flag."""
    q, r = _long_divide(a, b, term_budget)
    return q, not r


def recip_exact(a: Surreal, term_budget: int = DEFAULT_TERM_BUDGET) -> Surreal:
    return div(ONE, a, term_budget)


def classify(a: Surreal) -> Classification:
    if not a._terms:
        return Classification.ZERO
    e, c = a._terms[0]
    es = e.sign()
    if es > 0:
        return Classification.POSITIVE_INFINITE if c > 0 else Classification.NEGATIVE_INFINITE
    if es == 0:
        return Classification.FINITE_APPRECIABLE
    return Classification.INFINITESIMAL


def standard_part(a: Surreal) -> Fraction:
    """The real part of a finite surreal (its ``w^0`` coefficient)."""
    cls = classify(a)
    if cls in (Classification.POSITIVE_INFINITE, Classification.NEGATIVE_INFINITE):
        raise InfiniteArgument(f"{a} is infinite and has no standard part")
    for e, c in a._terms:
        if not e._terms:
            return c
    return Fraction(0)


def _real_bound(x: SurrealLike) -> Fraction:
    x = as_surreal(x)
    if not x.is_real():
        raise NonRealBound(f"cut bound {x} is not real")
    return x.to_fraction()


def _simplest_in_open_interval(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if (lo is None or lo < 0) and (hi is None or hi > 0):
        return Fraction(0)
    if lo is not None and lo >= 0:
        n = math.floor(lo) + 1
        if hi is None or n < hi:
            return Fraction(n)
    else:
        n = math.ceil(hi) - 1
        if lo is None or n > lo:
            return Fraction(n)
    # No integer strictly inside: the bounds sit in one unit interval and the
    # answer is the unique dyadic with the smallest denominator inside it.
    denom = 2
    while True:
        j = math.floor(lo * denom) + 1
        cand = Fraction(j, denom)
        if cand < hi:
            return cand
        denom *= 2


def simplest_between(left: Iterable[SurrealLike], right: Iterable[SurrealLike]) -> Surreal:
    """The earliest-born real strictly between ``max(left)`` and ``min(right)``.

    Empty sides are unbounded, so ``{|} = 0`` and ``{0|} = 1``.
    """
    ls = [_real_bound(x) for x in left]
    rs = [_real_bound(x) for x in right]
    lo = max(ls) if ls else None
    hi = min(rs) if rs else None
    if lo is not None and hi is not None and lo >= hi:
        raise MalformedCut(f"left option {lo} is not below right option {hi}")
    return from_rational(_simplest_in_open_interval(lo, hi))
