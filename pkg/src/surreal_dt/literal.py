"""Text form of surreal values.

Literal grammar (what `parse` accepts and `format_surreal` emits)::

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff ['*' atom] | atom
    atom  := 'w' ['^' exp] | 'w_' nat
    exp   := ['-'] int | '(' expr ')'
    coeff := int | int '/' posint | decimal

``w_k`` is shorthand for ``w^(w^k)``.  Decimals are exact (``0.9 == 9/10``).

`evaluate` is a small calculator on top of the same tokens that also allows
parentheses, ``*``, ``/`` and integer powers between arbitrary
sub-expressions, e.g. ``"1/(w+1)"`` or ``"(w^2 + w) / w"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from surreal_dt.surreal import (
    DEFAULT_TERM_BUDGET,
    ONE,
    Surreal,
    SurrealError,
    div,
    div_truncated,
    from_rational,
    omega_power,
)

__all__ = ["LiteralSyntaxError", "parse", "format_surreal", "evaluate", "Calculator"]


class LiteralSyntaxError(SurrealError, ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<wsub>w_(?P<sub>\d+))"
    r"|(?P<w>w)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "wsub", "w", an operator character, or "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos == n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LiteralSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group("num") is not None:
            toks.append(_Tok("num", m.group("num"), m.start("num")))
        elif m.group("wsub") is not None:
            toks.append(_Tok("wsub", m.group("sub"), m.start("wsub")))
        elif m.group("w") is not None:
            toks.append(_Tok("w", "w", m.start("w")))
        else:
            toks.append(_Tok(m.group("op"), m.group("op"), m.start("op")))
        pos = m.end()
        if m.group("num") is not None and pos < n and (text[pos].isalpha() or text[pos] == "_"):
            raise LiteralSyntaxError("number directly followed by a name", text, pos)
    toks.append(_Tok("end", "", n))
    return toks


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok.kind == "end" else repr(tok.text)
            raise LiteralSyntaxError(f"expected {want}, got {got}", self.text, tok.pos)
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.toks[self.i].kind == kind:
            self.i += 1
            return True
        return False

    def error(self, message: str) -> LiteralSyntaxError:
        return LiteralSyntaxError(message, self.text, self.peek.pos)


def _int_token(r: _Reader) -> int:
    tok = r.take("num")
    if not tok.text.isdigit():
        raise LiteralSyntaxError("expected an integer", r.text, tok.pos)
    return int(tok.text)


# -- strict literal grammar -------------------------------------------------


def _lit_expr(r: _Reader) -> Surreal:
    negate = r.accept("-")
    if not negate:
        r.accept("+")
    total = _lit_term(r)
    if negate:
        total = -total
    while r.peek.kind in ("+", "-"):
        op = r.take().kind
        t = _lit_term(r)
        total = total + t if op == "+" else total - t
    return total


def _lit_term(r: _Reader) -> Surreal:
    if r.peek.kind == "num":
        tok = r.take()
        coeff = Fraction(tok.text)
        if r.peek.kind == "/":
            if not tok.text.isdigit():
                raise r.error("decimal numerator in fraction")
            r.take()
            den = _int_token(r)
            if den == 0:
                raise LiteralSyntaxError("zero denominator", r.text, r.toks[r.i - 1].pos)
            coeff /= den
        if r.accept("*"):
            return _lit_atom(r) * from_rational(coeff)
        return from_rational(coeff)
    return _lit_atom(r)


def _lit_atom(r: _Reader) -> Surreal:
    tok = r.peek
    if tok.kind == "wsub":
        r.take()
        return omega_power(omega_power(int(tok.text)))
    if tok.kind == "w":
        r.take()
        if r.accept("^"):
            return omega_power(_lit_exp(r))
        return omega_power(ONE)
    raise r.error("expected a term")


def _lit_exp(r: _Reader) -> Surreal:
    if r.accept("("):
        e = _lit_expr(r)
        r.take(")")
        return e
    negative = r.accept("-")
    n = _int_token(r)
    return from_rational(-n if negative else n)


def parse(text: str) -> Surreal:
    """Parse a surreal literal such as ``"1/10*w^2 + 0.1*w - w_137"``."""
    r = _Reader(text)
    if r.peek.kind == "end":
        raise r.error("empty literal")
    value = _lit_expr(r)
    r.take("end")
    return value


# -- formatting -------------------------------------------------------------


def _format_exponent_atom(e: Surreal) -> str:
    if not e:
        return ""
    if e == ONE:
        return "w"
    if e.is_integer():
        return f"w^{e.to_fraction()}"
    if e.is_monomial() and e.leading_coefficient == 1:
        k = e.leading_exponent
        if k.is_integer() and k.to_fraction() > 0:
            return f"w_{k.to_fraction()}"
    return f"w^({format_surreal(e)})"


def format_surreal(x: Surreal) -> str:
    """Canonical text: reduced fractions, terms in decreasing exponent order."""
    if not x:
        return "0"
    parts = []
    for i, (e, c) in enumerate(x.terms):
        atom = _format_exponent_atom(e)
        mag = abs(c)
        if not atom:
            body = str(mag)
        elif mag == 1:
            body = atom
        else:
            body = f"{mag}*{atom}"
        if i == 0:
            parts.append("-" + body if c < 0 else body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


# -- calculator -------------------------------------------------------------


class Calculator:
    """Evaluates arithmetic over surreal literals.

    With ``truncate`` set, inexact quotients are cut off at ``term_budget``
    terms instead of raising, and ``exact`` is cleared.
    """

    def __init__(self, term_budget: int = DEFAULT_TERM_BUDGET, truncate: bool = False):
        self.term_budget = term_budget
        self.truncate = truncate
        self.exact = True

    def evaluate(self, text: str) -> Surreal:
        self.exact = True
        r = _Reader(text)
        if r.peek.kind == "end":
            raise r.error("empty expression")
        value = self._sum(r)
        r.take("end")
        return value

    def _divide(self, a: Surreal, b: Surreal) -> Surreal:
        if self.truncate:
            q, exact = div_truncated(a, b, self.term_budget)
            self.exact = self.exact and exact
            return q
        return div(a, b, self.term_budget)

    def _sum(self, r: _Reader) -> Surreal:
        total = self._product(r)
        while r.peek.kind in ("+", "-"):
            op = r.take().kind
            t = self._product(r)
            total = total + t if op == "+" else total - t
        return total

    def _product(self, r: _Reader) -> Surreal:
        value = self._unary(r)
        while r.peek.kind in ("*", "/"):
            op = r.take().kind
            rhs = self._unary(r)
            value = value * rhs if op == "*" else self._divide(value, rhs)
        return value

    def _unary(self, r: _Reader) -> Surreal:
        if r.accept("-"):
            return -self._unary(r)
        if r.accept("+"):
            return self._unary(r)
        return self._power(r)

    def _power(self, r: _Reader) -> Surreal:
        is_omega = r.peek.kind == "w"
        base = self._primary(r)
        if not r.accept("^"):
            return base
        exponent = self._unary_exponent(r)
        if is_omega:
            return omega_power(exponent)
        if not exponent.is_integer():
            raise r.error("only w may be raised to a non-integer power")
        n = int(exponent.to_fraction())
        if n >= 0:
            return base ** n
        return self._divide(ONE, base ** -n)

    def _unary_exponent(self, r: _Reader) -> Surreal:
        if r.accept("-"):
            return -self._unary_exponent(r)
        return self._power(r)

    def _primary(self, r: _Reader) -> Surreal:
        tok = r.peek
        if tok.kind == "num":
            r.take()
            return from_rational(Fraction(tok.text))
        if tok.kind == "wsub":
            r.take()
            return omega_power(omega_power(int(tok.text)))
        if tok.kind == "w":
            r.take()
            return omega_power(ONE)
        if r.accept("("):
            value = self._sum(r)
            r.take(")")
            return value
        raise r.error("expected a number, w, or '('")


def evaluate(text: str, term_budget: int = DEFAULT_TERM_BUDGET) -> Surreal:
    """Evaluate a calculator expression exactly."""
    return Calculator(term_budget).evaluate(text)

