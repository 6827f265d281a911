"""Random surreal generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from surreal_dt.surreal import Surreal

small_fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
nonzero_fractions = small_fractions.filter(bool)


def exponents(max_leaves: int = 3) -> st.SearchStrategy[Surreal]:
    base = st.one_of(
        st.integers(-3, 3).map(Surreal),
        st.fractions(min_value=-3, max_value=3, max_denominator=4).map(Surreal),
    )
    nested = st.lists(
        st.tuples(st.integers(-2, 2), st.integers(-3, 3).filter(bool)), min_size=1, max_size=2
    ).map(Surreal.from_terms)
    return st.one_of(base, base, nested)


surreals = st.lists(st.tuples(exponents(), nonzero_fractions), max_size=4).map(Surreal.from_terms)
nonzero_surreals = surreals.filter(bool)


def random_fraction(rng: random.Random, span: int = 40, den: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def random_surreal(rng: random.Random, terms: int = 3) -> Surreal:
    """A random value with integer, rational or nested exponents."""
    pairs = []
    for _ in range(rng.randint(0, terms)):
        kind = rng.random()
        if kind < 0.6:
            e = Surreal(rng.randint(-3, 3))
        elif kind < 0.85:
            e = Surreal(Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
        else:
            e = Surreal.from_terms([(rng.randint(0, 2), rng.choice([-1, 1, 2]))])
        pairs.append((e, random_fraction(rng)))
    return Surreal.from_terms(pairs)
