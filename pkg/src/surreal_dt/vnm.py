"""Surreal-valued von Neumann-Morgenstern representation, made executable.

Two directions:

* `induced_oracle` turns an outcome utility table into a preference oracle
  that ranks lotteries by exact expected utility, and `check_axioms` checks
  Completeness, Transitivity, Continuity* and Independence* for any oracle
  on a finite sample of lotteries.
* `construct_utility` goes the other way: given an oracle, it finds the best
  and worst sampled lotteries and assigns every lottery ``p`` the unique
  ``lam`` for which ``lam * best + (1 - lam) * worst ~ p``.

Surreal mixing weights cannot be found by bisection (there is no real number
between ``0`` and ``1/w``), so ``lam`` is searched for in an explicit finite
candidate set.  `default_candidates` covers every weight that arises from
utilities built out of monomials in ``w``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from surreal_dt.surreal import (
    DEFAULT_TERM_BUDGET,
    ONE,
    ZERO,
    ExactQuotientUnavailable,
    Surreal,
    as_surreal,
    compare,
    div,
    from_rational,
    omega_power,
)

__all__ = [
    "Pref",
    "Lottery",
    "PreferenceOracle",
    "EUOracle",
    "RelationOracle",
    "UnknownQuery",
    "AxiomStatus",
    "AxiomResult",
    "AxiomReport",
    "QuotientWitness",
    "UtilityAssignment",
    "IndifferencePointNotFound",
    "NonUniqueIndifference",
    "IncoherentPreference",
    "LinearityRow",
    "LinearityReport",
    "MonotonicityReport",
    "induced_oracle",
    "check_axioms",
    "construct_utility",
    "locate",
    "verify_linearity",
    "check_mixture_monotonicity",
    "dyadic_grid",
    "default_candidates",
    "monomial_candidates",
]


class Pref(enum.Enum):
    PREC = "<"
    SIM = "~"
    SUCC = ">"
    INCOMPARABLE = "?"

    def flipped(self) -> Pref:
        return {Pref.PREC: Pref.SUCC, Pref.SUCC: Pref.PREC}.get(self, self)


@dataclass(frozen=True)
class Lottery:
    """A probability distribution over a fixed, ordered outcome set."""

    outcomes: tuple[str, ...]
    probs: tuple[Surreal, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.outcomes) != len(self.probs):
            raise ValueError("one probability per outcome required")
        probs = tuple(as_surreal(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        for o, p in zip(self.outcomes, probs):
            if p < ZERO:
                raise ValueError(f"negative probability {p} on outcome {o!r}")
        total = sum(probs, ZERO)
        if total != ONE:
            raise ValueError(f"lottery probabilities sum to {total}, not 1")

    @classmethod
    def point(cls, outcomes: Sequence[str], outcome: str) -> Lottery:
        if outcome not in outcomes:
            raise KeyError(outcome)
        return cls(tuple(outcomes), tuple(ONE if o == outcome else ZERO for o in outcomes),
                   name=f"point({outcome})")

    @classmethod
    def from_mapping(cls, outcomes: Sequence[str], probs: Mapping[str, object],
                     name: str | None = None) -> Lottery:
        unknown = set(probs) - set(outcomes)
        if unknown:
            raise KeyError(f"unknown outcomes {sorted(unknown)}")
        return cls(tuple(outcomes), tuple(as_surreal(probs.get(o, 0)) for o in outcomes), name)

    def __getitem__(self, outcome: str) -> Surreal:
        return self.probs[self.outcomes.index(outcome)]

    def mix(self, p: object, other: Lottery) -> Lottery:
        """``p * self + (1 - p) * other``, componentwise."""
        if other.outcomes != self.outcomes:
            raise ValueError("cannot mix lotteries over different outcome sets")
        p = as_surreal(p)
        if p < ZERO or p > ONE:
            raise ValueError(f"mixing weight {p} outside [0, 1]")
        if p == ONE:
            return self
        if p == ZERO:
            return other
        q = ONE - p
        # A convex combination of valid lotteries is valid; skip re-checking.
        mixed = object.__new__(Lottery)
        object.__setattr__(mixed, "outcomes", self.outcomes)
        object.__setattr__(mixed, "probs", tuple(p * a + q * b for a, b in zip(self.probs, other.probs)))
        object.__setattr__(mixed, "name", None)
        return mixed

    def label(self) -> str:
        if self.name:
            return self.name
        return "[" + ", ".join(f"{o}: {p}" for o, p in zip(self.outcomes, self.probs) if p) + "]"

    def __str__(self) -> str:
        return self.label()


class UnknownQuery(LookupError):
    """The oracle has no answer for a lottery it was never told about."""


class PreferenceOracle:
    """Answers ``prefer(x, y)``: is ``x`` worse than, as good as, or better than ``y``."""

    def prefer(self, x: Lottery, y: Lottery) -> Pref:
        raise NotImplementedError

    def leq(self, x: Lottery, y: Lottery) -> bool:
        return self.prefer(x, y) in (Pref.PREC, Pref.SIM)


class EUOracle(PreferenceOracle):
    """Ranks lotteries by exact expected utility of an outcome utility table."""

    def __init__(self, utility: Mapping[str, object]):
        if not utility:
            raise ValueError("empty utility table")
        self.utility: Mapping[str, Surreal] = MappingProxyType(
            {o: as_surreal(u) for o, u in utility.items()}
        )
        self.outcomes = tuple(self.utility)
        self._cache: dict[Lottery, Surreal] = {}

    def expected_utility(self, x: Lottery) -> Surreal:
        eu = self._cache.get(x)
        if eu is None:
            missing = set(x.outcomes) - set(self.utility)
            if missing:
                raise UnknownQuery(f"no utility for outcomes {sorted(missing)}")
            eu = ZERO
            for o, p in zip(x.outcomes, x.probs):
                if p:
                    eu = eu + p * self.utility[o]
            self._cache[x] = eu
        return eu

    def prefer(self, x: Lottery, y: Lottery) -> Pref:
        c = compare(self.expected_utility(x), self.expected_utility(y))
        return Pref.PREC if c < 0 else Pref.SUCC if c > 0 else Pref.SIM

    def point(self, outcome: str) -> Lottery:
        return Lottery.point(self.outcomes, outcome)

    def points(self) -> list[Lottery]:
        return [self.point(o) for o in self.outcomes]


class RelationOracle(PreferenceOracle):
    """An explicit weak-preference relation over a set of named lotteries.

    Built from statements ``(a, op, b)`` with ``op`` one of ``<``, ``>``,
    ``=`` (or ``<=`` / ``>=``).  Pairs not covered by any statement are
    incomparable; lotteries not in the table raise `UnknownQuery`.  The
    relation is taken literally, with no transitive closure, so it can
    encode axiom violations.
    """

    def __init__(self, lotteries: Mapping[str, Lottery], statements: Iterable[tuple[str, str, str]]):
        self.lotteries = dict(lotteries)
        self._by_lottery = {lot: name for name, lot in self.lotteries.items()}
        self._leq: set[tuple[str, str]] = {(n, n) for n in self.lotteries}
        for a, op, b in statements:
            for n in (a, b):
                if n not in self.lotteries:
                    raise KeyError(f"unknown lottery {n!r}")
            if op in ("<", "<="):
                self._leq.add((a, b))
            elif op in (">", ">="):
                self._leq.add((b, a))
            elif op in ("=", "~"):
                self._leq.update({(a, b), (b, a)})
            else:
                raise ValueError(f"unknown relation {op!r}")
            if op in ("<", ">"):
                lo, hi = (a, b) if op == "<" else (b, a)
                if (hi, lo) in self._leq:
                    raise ValueError(f"contradictory statements about {a!r} and {b!r}")

    def _name(self, x: Lottery) -> str:
        if x.name in self.lotteries and self.lotteries[x.name] == x:
            return x.name
        try:
            return self._by_lottery[x]
        except KeyError:
            raise UnknownQuery(f"no preference recorded for {x}") from None

    def prefer(self, x: Lottery, y: Lottery) -> Pref:
        a, b = self._name(x), self._name(y)
        le, ge = (a, b) in self._leq, (b, a) in self._leq
        if le and ge:
            return Pref.SIM
        if le:
            return Pref.PREC
        if ge:
            return Pref.SUCC
        return Pref.INCOMPARABLE


def induced_oracle(utility: Mapping[str, object]) -> EUOracle:
    return EUOracle(utility)


# -- axiom checking ---------------------------------------------------------


class AxiomStatus(enum.Enum):
    PASS = "pass"
    FAIL = "FAIL"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class AxiomResult:
    name: str
    status: AxiomStatus
    checked: int
    detail: str
    counterexample: tuple = ()
    witnesses: Mapping[tuple[Lottery, Lottery, Lottery], object] = field(
        default_factory=dict, repr=False
    )

    @property
    def passed(self) -> bool:
        return self.status is AxiomStatus.PASS


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[AxiomResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name.lower().startswith(name.lower()):
                return r
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [f"{r.status.value:12s} {r.name}: {r.detail}" for r in self.results]


@dataclass(frozen=True)
class QuotientWitness:
    """A continuity weight ``num / den`` with no finite normal form.

    ``0 <= num <= den`` and ``den > 0``, so the weight lies in ``[0, 1]``.
    The quotient exists in the surreal field even though it cannot be
    written as a finite sum of monomials.
    """

    num: Surreal
    den: Surreal

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def _fmt(items: Iterable[object]) -> str:
    return "(" + ", ".join(str(x) for x in items) + ")"


def _continuity_witness(o, x, y, z, p_grid, term_budget) -> Surreal | QuotientWitness | None:
    if isinstance(o, EUOracle):
        ux, uy, uz = (o.expected_utility(v) for v in (x, y, z))
        if ux == uz:
            p = ONE  # x ~ y ~ z: any weight works, take 1 by convention
        else:
            try:
                p = div(uy - uz, ux - uz, term_budget)
            except ExactQuotientUnavailable:
                p = None
                num, den = uy - uz, ux - uz
                if den < ZERO:
                    num, den = -num, -den
                # p*ux + (1-p)*uz == uy, multiplied through by den
                if ZERO <= num <= den and num * ux + (den - num) * uz == den * uy:
                    return QuotientWitness(num, den)
        if p is not None and ZERO <= p <= ONE and o.prefer(x.mix(p, z), y) is Pref.SIM:
            return p
    for p in p_grid:
        if o.prefer(x.mix(p, z), y) is Pref.SIM:
            return p
    return None


def check_axioms(
    o: PreferenceOracle,
    sample: Sequence[Lottery],
    p_grid: Iterable[object],
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> AxiomReport:
    """Check the four representation axioms on ``sample``.

    Continuity* needs a weight ``p`` with ``p x + (1 - p) z ~ y`` whenever
    ``y`` lies between ``x`` and ``z``.  For an expected-utility oracle the
    weight is computed directly as ``(U(y) - U(z)) / (U(x) - U(z))``.  When
    that quotient has no finite normal form it is kept as a
    `QuotientWitness` and indifference is verified by cross-multiplying.
    Other oracles are searched over ``p_grid``.  Not finding a grid witness
    is reported as inconclusive rather than as a failure.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty lottery sample")
    grid = [as_surreal(p) for p in p_grid]
    if any(p < ZERO or p > ONE for p in grid):
        raise ValueError("p_grid values must lie in [0, 1]")
    n = len(sample)
    leq = [[o.leq(x, y) for y in sample] for x in sample]
    results = []

    # Completeness
    bad = next(((i, j) for i in range(n) for j in range(i + 1, n)
                if not leq[i][j] and not leq[j][i]), None)
    pairs = n * (n - 1) // 2
    if bad:
        i, j = bad
        results.append(AxiomResult("Completeness", AxiomStatus.FAIL, pairs,
                                   f"neither {sample[i]} <= {sample[j]} nor the reverse",
                                   (sample[i], sample[j])))
    else:
        results.append(AxiomResult("Completeness", AxiomStatus.PASS, pairs,
                                   f"all {pairs} pairs comparable"))

    # Transitivity
    bad = next(((i, j, k) for i, j, k in itertools.product(range(n), repeat=3)
                if leq[i][j] and leq[j][k] and not leq[i][k]), None)
    if bad:
        x, y, z = (sample[t] for t in bad)
        results.append(AxiomResult("Transitivity", AxiomStatus.FAIL, n ** 3,
                                   f"{x} <= {y} <= {z} but not {x} <= {z}", (x, y, z)))
    else:
        results.append(AxiomResult("Transitivity", AxiomStatus.PASS, n ** 3,
                                   f"all {n ** 3} triples"))

    # Continuity*
    witnesses: dict[tuple[Lottery, Lottery, Lottery], Surreal | QuotientWitness] = {}
    missing = None
    checked = 0
    try:
        for i, j, k in itertools.product(range(n), repeat=3):
            between = (leq[i][j] and leq[j][k]) or (leq[k][j] and leq[j][i])
            if not between:
                continue
            checked += 1
            x, y, z = sample[i], sample[j], sample[k]
            p = _continuity_witness(o, x, y, z, grid, term_budget)
            if p is None:
                missing = missing or (x, y, z)
            else:
                witnesses[x, y, z] = p
        if missing:
            x, y, z = missing
            results.append(AxiomResult(
                "Continuity*", AxiomStatus.INCONCLUSIVE, checked,
                f"no witness p in grid for y={y} between x={x}, z={z}",
                missing, witnesses))
        else:
            quotients = sum(isinstance(p, QuotientWitness) for p in witnesses.values())
            note = f" ({quotients} as exact quotients)" if quotients else ""
            results.append(AxiomResult("Continuity*", AxiomStatus.PASS, checked,
                                       f"witness found for all {checked} ordered triples{note}",
                                       (), witnesses))
    except UnknownQuery as exc:
        results.append(AxiomResult("Continuity*", AxiomStatus.INCONCLUSIVE, checked,
                                   f"oracle cannot rank mixtures: {exc}"))

    # Independence*, both directions of the biconditional
    pos = [p for p in grid if p > ZERO]
    checked = 0
    try:
        failure = None
        for i, j, k in itertools.product(range(n), repeat=3):
            x, y, z = sample[i], sample[j], sample[k]
            for p in pos:
                checked += 1
                mixed = o.leq(x.mix(p, z), y.mix(p, z))
                if mixed != leq[i][j]:
                    failure = (x, y, z, p)
                    break
            if failure:
                break
        if failure:
            x, y, z, p = failure
            direction = "<=" if leq[sample.index(x)][sample.index(y)] else "not <="
            results.append(AxiomResult(
                "Independence*", AxiomStatus.FAIL, checked,
                f"x {direction} y but mixing with z at p={p} disagrees for "
                f"{_fmt((x, y, z))}", failure))
        elif not pos:
            results.append(AxiomResult("Independence*", AxiomStatus.INCONCLUSIVE, 0,
                                       "p_grid has no weight in (0, 1]"))
        else:
            results.append(AxiomResult("Independence*", AxiomStatus.PASS, checked,
                                       f"all {checked} (x, y, z, p) quadruples"))
    except UnknownQuery as exc:
        results.append(AxiomResult("Independence*", AxiomStatus.INCONCLUSIVE, checked,
                                   f"oracle cannot rank mixtures: {exc}"))

    return AxiomReport(tuple(results))


# -- construction -----------------------------------------------------------


class IndifferencePointNotFound(LookupError):
    def __init__(self, lottery: Lottery):
        super().__init__(f"no candidate weight makes the best/worst mixture ~ {lottery}")
        self.lottery = lottery


class IncoherentPreference(ValueError):
    """The sample has no best and worst element under the oracle."""

    def __init__(self, lottery: Lottery, top: Lottery, bottom: Lottery):
        super().__init__(
            f"{lottery} is not ranked between the apparent best {top} and worst {bottom}"
        )
        self.lottery = lottery


class NonUniqueIndifference(ValueError):
    def __init__(self, lottery: Lottery, first: Surreal, second: Surreal):
        super().__init__(
            f"two weights {first} and {second} both give a mixture ~ {lottery}"
        )
        self.lottery = lottery
        self.candidates = (first, second)


@dataclass(frozen=True)
class UtilityAssignment:
    value: Mapping[Lottery, Surreal]
    top: Lottery
    bottom: Lottery
    candidates: tuple[Surreal, ...] = field(repr=False)
    constant: bool = False

    def __getitem__(self, lottery: Lottery) -> Surreal:
        return self.value[lottery]


def dyadic_grid(depth: int) -> list[Surreal]:
    """``k / 2^depth`` for ``k = 0 .. 2^depth``."""
    n = 1 << depth
    return [from_rational(Fraction(k, n)) for k in range(n + 1)]


def monomial_candidates(coefficients: Iterable[object], exponents: Iterable[object]) -> list[Surreal]:
    """Every ``c * w^e`` lying in ``[0, 1]``, plus 0 and 1, sorted."""
    out = {ZERO, ONE}
    exps = [as_surreal(e) for e in exponents]
    for c in coefficients:
        c = as_surreal(c)
        for e in exps:
            v = c * omega_power(e)
            if ZERO <= v <= ONE:
                out.add(v)
    return sorted(out, key=cmp_to_key(compare))


def default_candidates(
    dyadic_depth: int = 10,
    infinitesimal_exponents: Sequence[int] = (1, 2),
    infinitesimal_depth: int = 4,
) -> tuple[Surreal, ...]:
    """Dyadics of depth <= ``dyadic_depth``, plus small infinitesimal weights.

    The infinitesimal part is ``d * w^-e`` for dyadic ``d`` in ``(0, 1]`` of
    depth <= ``infinitesimal_depth``, the two-term sums of those over
    distinct exponents, and ``1 - x`` for each of them.
    """
    out = set(dyadic_grid(dyadic_depth))
    coeffs = dyadic_grid(infinitesimal_depth)[1:]
    monos = {e: [c * omega_power(-e) for c in coeffs] for e in infinitesimal_exponents}
    small = [m for ms in monos.values() for m in ms]
    for e1, e2 in itertools.combinations(infinitesimal_exponents, 2):
        small.extend(a + b for a in monos[e1] for b in monos[e2])
    out.update(small)
    out.update(ONE - s for s in small)
    return tuple(sorted(out, key=cmp_to_key(compare)))


def locate(
    o: PreferenceOracle,
    lottery: Lottery,
    top: Lottery,
    bottom: Lottery,
    candidates: Iterable[Surreal],
) -> Surreal:
    """The unique candidate ``lam`` with ``lam * top + (1 - lam) * bottom ~ lottery``."""
    found = None
    for lam in candidates:
        if o.prefer(top.mix(lam, bottom), lottery) is Pref.SIM:
            if found is not None and found != lam:
                raise NonUniqueIndifference(lottery, found, lam)
            found = lam
    if found is None:
        raise IndifferencePointNotFound(lottery)
    return found


def construct_utility(
    o: PreferenceOracle,
    sample: Sequence[Lottery],
    lambda_candidates: Iterable[object] | None = None,
) -> UtilityAssignment:
    """Build ``U(p) = lam_p`` on ``sample`` from pairwise oracle queries.

    The best and worst sampled lotteries (first in sample order among
    equivalents) get 1 and 0.  If they are indifferent every lottery gets the
    constant 0.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty lottery sample")
    top = bottom = sample[0]
    for x in sample[1:]:
        if o.prefer(x, top) is Pref.SUCC:
            top = x
        if o.prefer(x, bottom) is Pref.PREC:
            bottom = x
    for x in sample:
        if not (o.leq(bottom, x) and o.leq(x, top)):
            raise IncoherentPreference(x, top, bottom)
    if lambda_candidates is None:
        cands = default_candidates()
    else:
        cands = tuple(as_surreal(c) for c in lambda_candidates)
    if o.prefer(top, bottom) is Pref.SIM:
        return UtilityAssignment({x: ZERO for x in sample}, top, bottom, cands, constant=True)
    values: dict[Lottery, Surreal] = {}
    for x in sample:
        if x == top:
            values[x] = ONE
        elif x == bottom:
            values[x] = ZERO
        else:
            values[x] = locate(o, x, top, bottom, cands)
    return UtilityAssignment(values, top, bottom, cands)


@dataclass(frozen=True)
class LinearityRow:
    weight: Surreal
    p: Lottery
    p_prime: Lottery
    derived: Surreal | None
    predicted: Surreal
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class LinearityReport:
    rows: tuple[LinearityRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def mismatches(self) -> tuple[LinearityRow, ...]:
        return tuple(r for r in self.rows if not r.ok)


def verify_linearity(
    ua: UtilityAssignment,
    o: PreferenceOracle,
    mix_samples: Iterable[tuple[object, Lottery, Lottery]],
) -> LinearityReport:
    """Check ``U(a p + (1 - a) p') == a U(p) + (1 - a) U(p')``.

    The left side is re-derived by the same indifference search used to
    build ``ua``.  The predicted weight is added to the candidate set, so a
    row passes exactly when the oracle is indifferent at the predicted
    weight and at no other candidate.
    """
    rows = []
    for a, p, q in mix_samples:
        a = as_surreal(a)
        up = ua.value.get(p)
        uq = ua.value.get(q)
        try:
            if up is None:
                up = locate(o, p, ua.top, ua.bottom, ua.candidates)
            if uq is None:
                uq = locate(o, q, ua.top, ua.bottom, ua.candidates)
        except (IndifferencePointNotFound, NonUniqueIndifference) as exc:
            rows.append(LinearityRow(a, p, q, None, ZERO, False, str(exc)))
            continue
        predicted = a * up + (ONE - a) * uq
        if ua.constant:
            rows.append(LinearityRow(a, p, q, predicted, predicted, True, "constant utility"))
            continue
        cands = ua.candidates if predicted in ua.candidates else ua.candidates + (predicted,)
        try:
            derived = locate(o, p.mix(a, q), ua.top, ua.bottom, cands)
        except (IndifferencePointNotFound, NonUniqueIndifference) as exc:
            rows.append(LinearityRow(a, p, q, None, predicted, False, str(exc)))
            continue
        rows.append(LinearityRow(a, p, q, derived, predicted, derived == predicted))
    return LinearityReport(tuple(rows))


@dataclass(frozen=True)
class MonotonicityReport:
    checked: int
    violation: tuple[Surreal, Surreal] | None

    @property
    def ok(self) -> bool:
        return self.violation is None


def check_mixture_monotonicity(
    o: PreferenceOracle,
    top: Lottery,
    bottom: Lottery,
    candidates: Iterable[object],
) -> MonotonicityReport:
    """For ``b > a`` in ``candidates``, the ``b``-mixture of best and worst
    must be strictly preferred to the ``a``-mixture.

    Checks consecutive pairs of the sorted, deduplicated candidates
    (transitivity of the oracle carries it to all pairs).
    """
    cands = sorted({as_surreal(c) for c in candidates}, key=cmp_to_key(compare))
    mixes = [top.mix(c, bottom) for c in cands]
    for (a, ma), (b, mb) in zip(zip(cands, mixes), zip(cands[1:], mixes[1:])):
        if o.prefer(mb, ma) is not Pref.SUCC:
            return MonotonicityReport(len(cands) - 1, (a, b))
    return MonotonicityReport(max(len(cands) - 1, 0), None)
