"""Finitely additive surreal-valued probability on finite state spaces.

Events are label sets over a `StateSpace`; every subset is an event.  A
`Credence` assigns each state a nonnegative surreal mass, the masses summing
to exactly 1.  Masses may be infinitesimal, which is what makes regular
(nowhere-zero) credences possible over spaces where a real-valued one would
have to put zero somewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from surreal_dt.surreal import (
    DEFAULT_TERM_BUDGET,
    ONE,
    ZERO,
    Surreal,
    as_surreal,
    div,
)

__all__ = [
    "StateSpace",
    "Credence",
    "ProbabilityError",
    "NotNormalized",
    "NegativeMass",
    "MissingState",
    "UnknownState",
    "credence_new",
    "prob",
    "conditional",
    "check_nap",
    "NapCheck",
    "NapReport",
]

# check_nap enumerates 3**n disjoint event pairs.
MAX_EXHAUSTIVE_STATES = 10


class ProbabilityError(ValueError):
    pass


class NotNormalized(ProbabilityError):
    def __init__(self, total: Surreal):
        self.total = total
        self.deficit = total - ONE
        super().__init__(f"masses sum to {total}, off from 1 by {self.deficit}")


class NegativeMass(ProbabilityError):
    def __init__(self, state: str, mass: Surreal):
        self.state = state
        self.mass = mass
        super().__init__(f"state {state!r} has negative mass {mass}")


class MissingState(ProbabilityError):
    def __init__(self, states: Iterable[str]):
        self.states = tuple(states)
        super().__init__(f"no mass given for {', '.join(map(repr, self.states))}")


class UnknownState(ProbabilityError, KeyError):
    def __init__(self, states: Iterable[str]):
        self.states = tuple(states)
        ProbabilityError.__init__(self, f"unknown state(s) {', '.join(map(repr, self.states))}")

    __str__ = ProbabilityError.__str__


@dataclass(frozen=True)
class StateSpace:
    states: tuple[str, ...]

    def __init__(self, states: Iterable[str]):
        states = tuple(states)
        if not states:
            raise ValueError("a state space needs at least one state")
        if len(set(states)) != len(states):
            dupes = sorted({s for s in states if states.count(s) > 1})
            raise ValueError(f"duplicate state labels: {', '.join(dupes)}")
        object.__setattr__(self, "states", states)

    def __iter__(self) -> Iterator[str]:
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, label: object) -> bool:
        return label in self.states

    def event(self, labels: Iterable[str]) -> frozenset[str]:
        ev = frozenset(labels)
        unknown = ev.difference(self.states)
        if unknown:
            raise UnknownState(sorted(unknown))
        return ev

    def events(self) -> Iterator[frozenset[str]]:
        """Every event, smallest first, in a fixed order."""
        for k in range(len(self.states) + 1):
            for combo in itertools.combinations(self.states, k):
                yield frozenset(combo)


class Credence:
    """A validated probability assignment over a state space."""

    __slots__ = ("space", "mass")

    def __init__(self, space: StateSpace, mass: Mapping[str, object]):
        masses = _validate(space, mass)
        self.space = space
        self.mass: Mapping[str, Surreal] = MappingProxyType(masses)

    @classmethod
    def point(cls, space: StateSpace, state: str) -> Credence:
        return cls(space, {s: ONE if s == state else ZERO for s in space})

    @classmethod
    def uniform(cls, space: StateSpace) -> Credence:
        share = div(ONE, Surreal(len(space)))
        return cls(space, {s: share for s in space})

    def __getitem__(self, state: str) -> Surreal:
        try:
            return self.mass[state]
        except KeyError:
            raise UnknownState([state]) from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Credence):
            return NotImplemented
        return self.space == other.space and dict(self.mass) == dict(other.mass)

    def __hash__(self) -> int:
        return hash((self.space, tuple(self.mass[s] for s in self.space)))

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}={self.mass[s]}" for s in self.space)
        return f"Credence({inner})"

    def is_regular(self) -> bool:
        return all(m > ZERO for m in self.mass.values())


def _validate(space: StateSpace, mass: Mapping[str, object]) -> dict[str, Surreal]:
    unknown = [s for s in mass if s not in space]
    if unknown:
        raise UnknownState(unknown)
    missing = [s for s in space if s not in mass]
    if missing:
        raise MissingState(missing)
    masses = {s: as_surreal(mass[s]) for s in space}
    for s, m in masses.items():
        if m < ZERO:
            raise NegativeMass(s, m)
    total = sum(masses.values(), ZERO)
    if total != ONE:
        raise NotNormalized(total)
    return masses


def credence_new(space: StateSpace, mass: Mapping[str, object]) -> Credence:
    return Credence(space, mass)


def prob(cr: Credence, event: Iterable[str]) -> Surreal:
    ev = cr.space.event(event)
    return sum((cr.mass[s] for s in ev), ZERO)


def conditional(
    cr: Credence,
    event: Iterable[str],
    given: Iterable[str],
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> Surreal:
    """``P(event | given) = P(event & given) / P(given)`` by exact division."""
    a = cr.space.event(event)
    b = cr.space.event(given)
    pb = prob(cr, b)
    if not pb:
        raise ZeroDivisionError(f"conditioning on an event of probability 0: {sorted(b)}")
    return div(prob(cr, a & b), pb, term_budget)


@dataclass(frozen=True)
class NapCheck:
    name: str
    passed: bool | None  # None: not applicable
    required: bool
    detail: str
    counterexample: tuple[frozenset[str], ...] = ()


@dataclass(frozen=True)
class NapReport:
    checks: tuple[NapCheck, ...]
    probabilities: Mapping[frozenset[str], Surreal] = field(repr=False)
    deficit: Surreal = ZERO

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    def __getitem__(self, name: str) -> NapCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            if c.passed is None:
                status = "n/a "
            elif c.passed:
                status = "pass"
            else:
                status = "FAIL" if c.required else "no  "
            out.append(f"{status} {c.name}: {c.detail}")
        return out


def _fmt_event(ev: frozenset[str], order: tuple[str, ...]) -> str:
    return "{" + ", ".join(s for s in order if s in ev) + "}"


def check_nap(
    assignment: Credence | Mapping[str, object],
    space: StateSpace | None = None,
    require_regularity: bool = False,
) -> NapReport:
    """Check the non-Archimedean probability axioms on every event.

    ``assignment`` is either a `Credence` or a raw state -> mass mapping
    (which need not be normalized; that is what NAP2 checks).  Events are
    enumerated exhaustively, so the space is limited to
    `MAX_EXHAUSTIVE_STATES` states.

    Regularity (NAP1) is always evaluated but only counts toward ``ok``
    when ``require_regularity`` is set.  The derived fact
    ``P(A) = 1 <-> A = Omega`` is only asserted when regularity holds.
    """
    if isinstance(assignment, Credence):
        space = assignment.space
        raw: Mapping[str, object] = assignment.mass
    else:
        raw = assignment
        if space is None:
            space = StateSpace(raw.keys())
    if len(space) > MAX_EXHAUSTIVE_STATES:
        raise ValueError(f"exhaustive NAP check limited to {MAX_EXHAUSTIVE_STATES} states")
    order = space.states
    checks: list[NapCheck] = []

    # NAP0: P is a total function from the powerset into a superreal field.
    missing = [s for s in order if s not in raw]
    extra = [s for s in raw if s not in space]
    if missing or extra:
        bits = []
        if missing:
            bits.append(f"no mass for {', '.join(missing)}")
        if extra:
            bits.append(f"mass for unknown {', '.join(map(str, extra))}")
        checks.append(
            NapCheck("NAP0 domain and range", False, True, "; ".join(bits),
                     tuple(frozenset([s]) for s in missing))
        )
        return NapReport(tuple(checks), {}, ZERO)
    masses = {s: as_surreal(raw[s]) for s in order}
    checks.append(
        NapCheck("NAP0 domain and range", True, True,
                 f"total on all {2 ** len(order)} events of a {len(order)}-state space")
    )

    table: dict[frozenset[str], Surreal] = {}
    for ev in space.events():
        table[ev] = sum((masses[s] for s in order if s in ev), ZERO)
    omega_ev = frozenset(order)
    empty = frozenset()

    # NAP1: P(empty) = 0 and every nonempty event gets positive probability.
    bad = [ev for ev in table if ev and not table[ev] > ZERO]
    regular = table[empty] == ZERO and not bad
    if regular:
        detail = "every nonempty event has positive probability"
        cex: tuple[frozenset[str], ...] = ()
    else:
        worst = min(bad, key=len) if bad else empty
        detail = f"P{_fmt_event(worst, order)} = {table[worst]}"
        cex = (worst,)
    checks.append(NapCheck("NAP1 regularity", regular, require_regularity, detail, cex))

    # NAP2: normalization.
    total = table[omega_ev]
    deficit = total - ONE
    if deficit:
        checks.append(NapCheck("NAP2 normalization", False, True,
                               f"P(Omega) = {total}, deficit {deficit}", (omega_ev,)))
    else:
        checks.append(NapCheck("NAP2 normalization", True, True, "P(Omega) = 1"))

    # NAP3: finite additivity over every disjoint pair.
    n_pairs = 0
    additive_cex: tuple[frozenset[str], ...] = ()
    for labels in itertools.product((0, 1, 2), repeat=len(order)):
        a = frozenset(s for s, t in zip(order, labels) if t == 1)
        b = frozenset(s for s, t in zip(order, labels) if t == 2)
        n_pairs += 1
        if table[a | b] != table[a] + table[b]:
            additive_cex = (a, b)
            break
    if additive_cex:
        a, b = additive_cex
        checks.append(NapCheck("NAP3 additivity", False, True,
                               f"P({_fmt_event(a, order)} u {_fmt_event(b, order)}) != sum",
                               additive_cex))
    else:
        checks.append(NapCheck("NAP3 additivity", True, True,
                               f"P(A u B) = P(A) + P(B) on all {n_pairs} disjoint pairs"))

    # Fact (1): every probability lies in [0, 1].
    out_of_range = [ev for ev, p in table.items() if p < ZERO or p > ONE]
    if out_of_range:
        ev = out_of_range[0]
        checks.append(NapCheck("fact 1 range", False, True,
                               f"P{_fmt_event(ev, order)} = {table[ev]} outside [0, 1]", (ev,)))
    else:
        checks.append(NapCheck("fact 1 range", True, True, "all probabilities in [0, 1]"))

    # Fact (2): P(A) = 1 iff A = Omega, which needs regularity.
    if regular:
        sure = [ev for ev, p in table.items() if p == ONE and ev != omega_ev]
        if sure or table[omega_ev] != ONE:
            ev = sure[0] if sure else omega_ev
            checks.append(NapCheck("fact 2 certainty", False, True,
                                   f"P{_fmt_event(ev, order)} = {table[ev]}", (ev,)))
        else:
            checks.append(NapCheck("fact 2 certainty", True, True, "P(A) = 1 only for A = Omega"))
    else:
        checks.append(NapCheck("fact 2 certainty", None, False, "skipped: not regular"))

    return NapReport(tuple(checks), MappingProxyType(table), deficit)
