from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from strategies import surreals
from surreal_dt.literal import Calculator, LiteralSyntaxError, evaluate, format_surreal, parse
from surreal_dt.surreal import (
    OMEGA,
    DepthExceeded,
    ExactQuotientUnavailable,
    depth_limit,
    from_rational,
    omega_k,
    omega_power,
)


def test_like_terms_merge():
    x = parse("0.9*w - 0.1*w")
    assert x == Fraction(4, 5) * OMEGA
    assert format_surreal(x) == "4/5*w"


def test_omega_subscript():
    assert parse("w_137") == omega_power(omega_power(137))
    assert parse("w_0") == OMEGA


@pytest.mark.parametrize(
    "text, value",
    [
        ("0", from_rational(0)),
        ("-3/4", from_rational(Fraction(-3, 4))),
        (".5", from_rational(Fraction(1, 2))),
        ("w^2 + 1", OMEGA * OMEGA + 1),
        ("w^-1", omega_power(-1)),
        ("2*w^(1/2)", 2 * omega_power(Fraction(1, 2))),
        ("w^(w + 1)", omega_power(OMEGA + 1)),
        ("-w_5", -omega_k(5)),
        ("1/10*w^2 + 1/10*w", Fraction(1, 10) * OMEGA * OMEGA + Fraction(1, 10) * OMEGA),
    ],
)
def test_parse_examples(text, value):
    assert parse(text) == value


@pytest.mark.parametrize(
    "value, text",
    [
        (from_rational(0), "0"),
        (Fraction(1, 10) * OMEGA * OMEGA + Fraction(1, 10) * OMEGA, "1/10*w^2 + 1/10*w"),
        (OMEGA - 1, "w - 1"),
        (-OMEGA + 7 - omega_power(-1), "-w + 7 - w^-1"),
        (omega_k(137), "w_137"),
        (omega_power(omega_power(1)), "w_1"),
        (omega_power(omega_power(-1)), "w^(w^-1)"),
        (omega_power(omega_power(5) - omega_power(137)), "w^(-w^137 + w^5)"),
    ],
)
def test_format_examples(value, text):
    assert format_surreal(value) == text


@settings(max_examples=200)
@given(surreals)
def test_parse_format_round_trip(x):
    assert parse(format_surreal(x)) == x


@given(surreals)
def test_str_is_format(x):
    assert str(x) == format_surreal(x)
    assert repr(x) == f"Surreal('{format_surreal(x)}')"


@pytest.mark.parametrize(
    "bad", ["", "w^", "2w", "1/0", "w^1.5", "1 +", "w_", "(w)", "3 * 4", "x", "w^(1"]
)
def test_parse_rejects(bad):
    with pytest.raises(LiteralSyntaxError):
        parse(bad)


def test_syntax_error_carries_position():
    with pytest.raises(LiteralSyntaxError) as info:
        parse("w + $")
    assert info.value.pos == 4


def test_parse_respects_depth_limit():
    with depth_limit(2):
        with pytest.raises(DepthExceeded):
            parse("w_3")


def test_calculator_expressions():
    assert evaluate("(w^2 + w) / w") == OMEGA + 1
    assert evaluate("2 * (w + 3) - 6") == 2 * OMEGA
    assert evaluate("w_5 / w_137") == omega_power(omega_power(5) - omega_power(137))
    assert evaluate("(w + 1)^2") == OMEGA * OMEGA + 2 * OMEGA + 1
    assert evaluate("10^3") == 1000
    assert evaluate("2^-2") == Fraction(1, 4)
    assert evaluate("-w^2") == -(OMEGA * OMEGA)
    assert evaluate("0.2 - 1/w_137") == Fraction(1, 5) - omega_power(-omega_power(137))


def test_calculator_inexact_division():
    with pytest.raises(ExactQuotientUnavailable):
        evaluate("1/(w+1)")
    calc = Calculator(term_budget=4, truncate=True)
    value = calc.evaluate("1/(w+1)")
    assert not calc.exact
    assert value == omega_power(-1) - omega_power(-2) + omega_power(-3) - omega_power(-4)
    assert calc.evaluate("1/w") == omega_power(-1) and calc.exact


def test_calculator_rejects_non_integer_power_of_non_omega():
    with pytest.raises(LiteralSyntaxError):
        evaluate("2^(1/2)")
