from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import birthday_days, simplest_by_enumeration
from strategies import nonzero_surreals, small_fractions, surreals
from surreal_dt.surreal import (
    OMEGA,
    ONE,
    ZERO,
    Classification,
    DepthExceeded,
    ExactQuotientUnavailable,
    InfiniteArgument,
    MalformedCut,
    NonRealBound,
    Surreal,
    add,
    classify,
    compare,
    depth_limit,
    div,
    div_truncated,
    from_rational,
    mul,
    neg,
    omega_k,
    omega_power,
    recip_exact,
    simplest_between,
    standard_part,
    sub,
)


def w(e=1):
    return omega_power(e)


# -- canonical form --------------------------------------------------------


def assert_canonical(x: Surreal) -> None:
    exps = [e for e, _ in x.terms]
    for a, b in zip(exps, exps[1:]):
        assert compare(a, b) > 0
    for e, c in x.terms:
        assert c != 0
        assert isinstance(c, Fraction)
        assert_canonical(e)


def test_zero_is_empty():
    assert from_rational(0).terms == ()
    assert ZERO.terms == ()
    assert Surreal().terms == ()


def test_half_is_single_real_term():
    assert from_rational(Fraction(1, 2)).terms == ((ZERO, Fraction(1, 2)),)


def test_constructor_rejects_float_and_bool():
    with pytest.raises(TypeError):
        Surreal(0.5)
    with pytest.raises(TypeError):
        Surreal(True)


def test_from_terms_merges_and_sorts():
    x = Surreal.from_terms([(0, 3), (1, 2), (0, -3), (2, 1)])
    assert x.terms == ((Surreal(2), Fraction(1)), (ONE, Fraction(2)))


@given(surreals, surreals)
def test_operations_stay_canonical(a, b):
    for v in (a + b, a - b, a * b, -a):
        assert_canonical(v)


@given(surreals, surreals)
def test_structural_equality_iff_compare_equal(a, b):
    assert (a.terms == b.terms) == (compare(a, b) == 0) == (a == b)


@given(surreals)
def test_hash_consistent_with_equality(a):
    b = Surreal.from_terms(list(reversed(a.terms)))
    assert a == b and hash(a) == hash(b)


def test_real_hash_matches_fraction():
    assert hash(from_rational(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert {Surreal(2): "x"}[2] == "x"


# -- omega power and depth -------------------------------------------------


def test_omega_power_basics():
    assert w(1) == OMEGA
    assert w(0) == ONE
    assert w(-1) * w(1) == ONE
    assert recip_exact(w(-1)) == OMEGA


def test_depths():
    assert ZERO.depth == 0
    assert ONE.depth == 1
    assert OMEGA.depth == 2
    assert omega_k(137).depth == 3


def test_depth_limit_enforced():
    with depth_limit(2):
        assert w(1) == OMEGA
        with pytest.raises(DepthExceeded):
            w(w(1))
    with depth_limit(3):
        assert mul(omega_k(1), omega_k(1)).depth == 3
        with pytest.raises(DepthExceeded):
            w(w(w(1)))


def test_depth_limit_restored():
    with depth_limit(1):
        pass
    assert omega_k(137).depth == 3


# -- comparison --------------------------------------------------------------


def test_omega_exceeds_half_omega():
    assert compare(OMEGA, Fraction(1, 2) * OMEGA) == 1


@given(surreals)
def test_compare_reflexive(x):
    assert compare(x, x) == 0


def test_half_omega_plus_5000():
    assert compare(Fraction(1, 2) * OMEGA + 5000, Fraction(1, 2) * OMEGA) == 1


def test_omega_minus_omega_is_zero():
    assert OMEGA + neg(OMEGA) == ZERO


def test_lower_infinities_product_below_omega_137():
    assert omega_k(100) * omega_k(5) < omega_k(137)
    prod = ONE
    for k in range(0, 137):
        prod = prod * omega_k(k)
    assert prod < omega_k(137)


def test_infinitesimal_below_every_positive_real():
    eps = w(-1)
    for q in (Fraction(1, 10**9), Fraction(1, 3), Fraction(5)):
        assert ZERO < eps < from_rational(q)


@given(surreals, surreals, surreals)
def test_order_trichotomy_and_transitivity(a, b, c):
    assert sum([a < b, a == b, a > b]) == 1
    if a <= b and b <= c:
        assert a <= c


# -- independent oracle: values as functions of a variable x -> oo -------------
#
# Values with rational exponents are Puiseux polynomials in x = w.  Sympy
# expands sums and products independently of our term-merging code, and the
# order is read off the limit of the difference as x -> oo.

X = sympy.Symbol("x", positive=True)


def real_exponent_surreals():
    exps = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    return st.lists(st.tuples(exps, small_fractions.filter(bool)), max_size=4).map(
        lambda pairs: Surreal.from_terms((from_rational(e), c) for e, c in pairs)
    )


def to_sympy(x: Surreal):
    return sum(
        (sympy.Rational(c.numerator, c.denominator)
         * X ** sympy.Rational(e.to_fraction().numerator, e.to_fraction().denominator)
         for e, c in x.terms),
        sympy.Integer(0),
    )


def from_sympy(expr) -> Surreal:
    pairs = []
    for term in sympy.Add.make_args(sympy.expand(expr)):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        exp = sympy.degree(rest, X) if rest.is_polynomial(X) else rest.as_base_exp()[1]
        if rest == 1:
            exp = 0
        pairs.append((Fraction(int(sympy.numer(exp)), int(sympy.denom(exp))),
                      Fraction(int(coeff.p), int(coeff.q))))
    return Surreal.from_terms((from_rational(e), c) for e, c in pairs)


def sign_at_infinity(expr) -> int:
    expr = sympy.expand(expr)
    if expr == 0:
        return 0
    return int(sympy.sign(sympy.limit(expr * X ** 10, X, sympy.oo)))


@settings(max_examples=60, deadline=None)
@given(real_exponent_surreals(), real_exponent_surreals())
def test_arithmetic_matches_puiseux_oracle(a, b):
    sa, sb = to_sympy(a), to_sympy(b)
    assert a + b == from_sympy(sa + sb)
    assert a * b == from_sympy(sa * sb)
    assert compare(a, b) == sign_at_infinity(sa - sb)


# -- field laws --------------------------------------------------------------


@given(surreals, surreals, surreals)
def test_field_laws(a, b, c):
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, neg(a)) == ZERO
    assert sub(a, b) == add(a, neg(b))
    assert mul(ONE, a) == a


@given(surreals, surreals, surreals, surreals)
def test_order_compatible_with_addition(x, x2, y, y2):
    if x < x2 and y <= y2:
        assert x + y < x2 + y2


@given(surreals, surreals, nonzero_surreals)
def test_order_compatible_with_positive_multiplication(x, y, p):
    p = abs(p)
    if x < y:
        assert p * x < p * y


@given(small_fractions, small_fractions)
def test_embedding_is_homomorphism(p, q):
    fp, fq = from_rational(p), from_rational(q)
    assert fp + fq == from_rational(p + q)
    assert fp * fq == from_rational(p * q)
    assert fp - fq == from_rational(p - q)
    assert (fp < fq) == (p < q)


proper_dyadics = st.integers(1, 20).flatmap(
    lambda d: st.integers(1, 2**d - 1).map(lambda k: Fraction(k, 2**d))
)


@given(proper_dyadics)
def test_proper_fraction_of_omega_is_smaller(p):
    assert 0 < p < 1
    assert p * OMEGA < OMEGA


# -- division ----------------------------------------------------------------


def test_recip_examples():
    assert recip_exact(OMEGA) == w(-1)
    assert recip_exact(OMEGA).terms == ((from_rational(-1), Fraction(1)),)
    assert recip_exact(from_rational(Fraction(2, 3))) == from_rational(Fraction(3, 2))


@pytest.mark.parametrize("budget", [1, 5, 64, 200])
def test_recip_of_omega_plus_one_never_exact(budget):
    with pytest.raises(ExactQuotientUnavailable) as info:
        recip_exact(OMEGA + 1, budget)
    # the remainder after k quotient terms is (-1)^k w^-k
    assert info.value.remainder == from_rational((-1) ** budget) * w(-budget)


def test_division_examples():
    assert div(omega_k(5), omega_k(137)) == w(omega_power(5) - omega_power(137))
    assert div(OMEGA ** 2 + OMEGA, OMEGA) == OMEGA + 1
    assert OMEGA * (OMEGA + 1) == OMEGA ** 2 + OMEGA
    assert div(OMEGA ** 2 - 1, OMEGA + 1) == OMEGA - 1


@given(nonzero_surreals)
def test_monomial_self_division(x):
    m = Surreal.from_terms([x.terms[0]])
    assert div(m, m) == ONE


@given(nonzero_surreals)
def test_recip_sound_whenever_it_returns(x):
    try:
        r = recip_exact(x, 16)
    except ExactQuotientUnavailable:
        return
    assert x * r == ONE


@given(surreals, nonzero_surreals)
def test_exact_division_inverts_multiplication(a, b):
    assert div(a * b, b) == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        div(ONE, ZERO)
    with pytest.raises(ZeroDivisionError):
        recip_exact(ZERO)


def test_truncated_division_flags_inexact():
    q, exact = div_truncated(ONE, OMEGA + 1, 3)
    assert not exact
    assert q == w(-1) - w(-2) + w(-3)
    q, exact = div_truncated(OMEGA ** 2 + OMEGA, OMEGA, 3)
    assert exact and q == OMEGA + 1


def test_operator_division_and_powers():
    assert OMEGA / OMEGA == ONE
    assert 1 / OMEGA == w(-1)
    assert OMEGA ** -2 == w(-2)
    assert (OMEGA + 1) ** 2 == OMEGA ** 2 + 2 * OMEGA + 1


# -- classification ----------------------------------------------------------


def test_classify_examples():
    assert classify(OMEGA - 1) is Classification.POSITIVE_INFINITE
    assert classify(1 - OMEGA) is Classification.NEGATIVE_INFINITE
    assert classify(ZERO) is Classification.ZERO
    assert classify(from_rational(Fraction(-2, 3)) + w(-1)) is Classification.FINITE_APPRECIABLE
    assert classify(div(ONE, omega_k(137))) is Classification.INFINITESIMAL
    assert str(Classification.POSITIVE_INFINITE) == "PositiveInfinite"


def test_standard_part():
    assert standard_part(Fraction(1, 2) * w(-1) + 7) == 7
    assert standard_part(w(-3)) == 0
    assert standard_part(ZERO) == 0
    with pytest.raises(InfiniteArgument):
        standard_part(OMEGA)


@given(surreals)
def test_classification_determined_by_leading_term(x):
    cls = classify(x)
    if not x:
        assert cls is Classification.ZERO
        return
    e, c = x.terms[0]
    if e > 0:
        assert cls is (Classification.POSITIVE_INFINITE if c > 0 else Classification.NEGATIVE_INFINITE)
    elif e == 0:
        assert cls is Classification.FINITE_APPRECIABLE
    else:
        assert cls is Classification.INFINITESIMAL


# -- simplest number in a cut ------------------------------------------------


def test_birthday_enumeration_sanity():
    days = birthday_days(3)
    assert days[1] == [-1, 1]
    assert days[2] == [-2, Fraction(-1, 2), Fraction(1, 2), 2]
    assert len(days[3]) == 8


def test_simplest_between_examples():
    assert simplest_between([], []) == 0
    assert simplest_between([0], []) == 1
    assert simplest_between([], [0]) == -1
    assert simplest_between([1], []) == 2
    assert simplest_between([], [-1]) == -2
    assert simplest_between([Fraction(1, 3)], [Fraction(1, 2)]) == Fraction(3, 8)
    assert simplest_between([-3], [Fraction(-5, 2)]) == Fraction(-11, 4)
    assert simplest_between([0, Fraction(1, 4)], [1, 3]) == Fraction(1, 2)
    assert simplest_between([Fraction(-7, 2)], [Fraction(9, 4)]) == 0


def test_simplest_between_errors():
    with pytest.raises(MalformedCut):
        simplest_between([1], [1])
    with pytest.raises(MalformedCut):
        simplest_between([2], [1])
    with pytest.raises(NonRealBound):
        simplest_between([OMEGA], [])


@given(st.lists(small_fractions, max_size=3), st.lists(small_fractions, max_size=3))
def test_simplest_between_matches_enumeration_on_random_cuts(left, right):
    lo = max(left) if left else None
    hi = min(right) if right else None
    if lo is not None and hi is not None and lo >= hi:
        with pytest.raises(MalformedCut):
            simplest_between(left, right)
        return
    got = simplest_between(left, right).to_fraction()
    assert (lo is None or got > lo) and (hi is None or got < hi)
    # The answer is born by day |integer part| + (denominator bits) + 1;
    # enumerate that far when it is cheap.
    bits = got.denominator.bit_length() - 1
    assert got.denominator == 2 ** bits
    needed = int(abs(got)) + bits + 2
    if needed <= 11:
        assert got == simplest_by_enumeration(lo, hi, DAYS_11[: needed + 1])


DAYS_11 = birthday_days(11)
