"""Expected utility, ranking, dominance and mixed strategies.

A `DecisionProblem` is a finite actions-by-states matrix of surreal
utilities together with a `Credence` over the states.  Everything here is
exact: expected utilities are finite surreal sums, so an infinite payoff
never swallows a finite one and ``0.5 w`` stays strictly below ``w``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence

from surreal_dt.probability import Credence, StateSpace
from surreal_dt.surreal import ONE, ZERO, Surreal, as_surreal, compare, from_rational

__all__ = [
    "DecisionProblem",
    "Mixture",
    "DominanceVerdict",
    "DominanceResult",
    "MixtureRow",
    "MixtureReport",
    "UnknownAction",
    "InvalidMixture",
    "InvalidProblem",
    "expected_utility",
    "expected_utilities",
    "rank",
    "dominance",
    "dominance_detail",
    "dominance_matrix",
    "mixture_eu",
    "pure_beats_mixtures",
    "simplex_grid",
    "uniform_corner_mixtures",
    "default_mixture_grid",
]


class UnknownAction(KeyError):
    def __init__(self, action: str):
        super().__init__(action)
        self.action = action

    def __str__(self) -> str:
        return f"unknown action {self.action!r}"


class InvalidMixture(ValueError):
    pass


class InvalidProblem(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    actions: tuple[str, ...]
    credence: Credence
    utility: Mapping[tuple[str, str], Surreal]

    def __init__(
        self,
        actions: Iterable[str],
        credence: Credence,
        utility: Mapping[tuple[str, str], object],
    ):
        actions = tuple(actions)
        if not actions:
            raise InvalidProblem("a decision problem needs at least one action")
        if len(set(actions)) != len(actions):
            raise InvalidProblem("duplicate action labels")
        space = credence.space
        table = {}
        for a in actions:
            for s in space:
                if (a, s) not in utility:
                    raise InvalidProblem(f"no utility for action {a!r} in state {s!r}")
                table[a, s] = as_surreal(utility[a, s])
        extra = set(utility) - set(table)
        if extra:
            a, s = sorted(extra)[0]
            raise InvalidProblem(f"utility given for undeclared cell ({a!r}, {s!r})")
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "credence", credence)
        object.__setattr__(self, "utility", MappingProxyType(table))

    @classmethod
    def from_rows(cls, rows: Mapping[str, Sequence[object]], credence: Credence) -> DecisionProblem:
        """Build from ``{action: [utility per state, in state order]}``."""
        states = credence.space.states
        utility = {}
        for a, row in rows.items():
            if len(row) != len(states):
                raise InvalidProblem(
                    f"row {a!r} has {len(row)} entries for {len(states)} states"
                )
            for s, u in zip(states, row):
                utility[a, s] = u
        return cls(rows.keys(), credence, utility)

    @property
    def space(self) -> StateSpace:
        return self.credence.space

    @property
    def states(self) -> tuple[str, ...]:
        return self.credence.space.states

    def u(self, action: str, state: str) -> Surreal:
        if action not in self.actions:
            raise UnknownAction(action)
        return self.utility[action, state]

    def row(self, action: str) -> tuple[Surreal, ...]:
        return tuple(self.u(action, s) for s in self.states)

    def with_credence(self, credence: Credence) -> DecisionProblem:
        if credence.space != self.space:
            raise InvalidProblem("credence is over a different state space")
        return DecisionProblem(self.actions, credence, self.utility)

    def transformed(self, fn: Callable[[Surreal], Surreal]) -> DecisionProblem:
        """Apply ``fn`` to every utility cell."""
        return DecisionProblem(
            self.actions, self.credence, {k: fn(v) for k, v in self.utility.items()}
        )


def expected_utility(p: DecisionProblem, action: str) -> Surreal:
    if action not in p.actions:
        raise UnknownAction(action)
    total = ZERO
    for s in p.states:
        total = total + p.credence.mass[s] * p.utility[action, s]
    return total


def expected_utilities(p: DecisionProblem) -> dict[str, Surreal]:
    return {a: expected_utility(p, a) for a in p.actions}


def rank(p: DecisionProblem) -> list[list[str]]:
    """Actions grouped into equal-EU classes, best class first.

    Within a class actions keep their declaration order.
    """
    eus = expected_utilities(p)
    distinct: list[Surreal] = []
    for v in eus.values():
        if v not in distinct:
            distinct.append(v)
    distinct.sort(key=cmp_to_key(lambda x, y: compare(y, x)))
    return [[a for a in p.actions if eus[a] == v] for v in distinct]


class DominanceVerdict(enum.Enum):
    STRICTLY_DOMINATES = "StrictlyDominates"
    WEAKLY_DOMINATES = "WeaklyDominates"
    NONE = "None"

    @property
    def weak(self) -> bool:
        return self is not DominanceVerdict.NONE

    @property
    def strict(self) -> bool:
        return self is DominanceVerdict.STRICTLY_DOMINATES

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DominanceResult:
    verdict: DominanceVerdict
    better_states: tuple[str, ...]
    worse_states: tuple[str, ...]
    # Strict dominance whose every strict advantage sits in a zero-credence
    # state does not force a strict EU gap.
    strict_needs_positive_credence: bool = False

    def note(self) -> str:
        if self.strict_needs_positive_credence:
            return "strict only in zero-credence states: " + ", ".join(self.better_states)
        return ""


def dominance_detail(p: DecisionProblem, a: str, b: str) -> DominanceResult:
    """Statewise comparison of action ``a`` against action ``b``."""
    for x in (a, b):
        if x not in p.actions:
            raise UnknownAction(x)
    better, worse = [], []
    for s in p.states:
        c = compare(p.utility[a, s], p.utility[b, s])
        if c > 0:
            better.append(s)
        elif c < 0:
            worse.append(s)
    if worse:
        verdict = DominanceVerdict.NONE
    elif better:
        verdict = DominanceVerdict.STRICTLY_DOMINATES
    else:
        verdict = DominanceVerdict.WEAKLY_DOMINATES
    needs = verdict.strict and all(p.credence.mass[s] == ZERO for s in better)
    return DominanceResult(verdict, tuple(better), tuple(worse), needs)


def dominance(p: DecisionProblem, a: str, b: str) -> DominanceVerdict:
    return dominance_detail(p, a, b).verdict


def dominance_matrix(p: DecisionProblem) -> dict[tuple[str, str], DominanceResult]:
    """Verdicts for every ordered pair of distinct actions."""
    return {
        (a, b): dominance_detail(p, a, b)
        for a, b in itertools.permutations(p.actions, 2)
    }


class Mixture:
    """A probability mixture over actions (or any labels).

    Weights are nonnegative surreals summing to exactly 1; zero weights are
    dropped from the support but kept in ``weights``.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Mapping[str, object]):
        ws = {k: as_surreal(v) for k, v in weights.items()}
        if not ws:
            raise InvalidMixture("empty mixture")
        for k, v in ws.items():
            if v < ZERO:
                raise InvalidMixture(f"negative weight {v} on {k!r}")
        total = sum(ws.values(), ZERO)
        if total != ONE:
            raise InvalidMixture(f"weights sum to {total}, not 1")
        self.weights: Mapping[str, Surreal] = MappingProxyType(ws)

    @classmethod
    def point(cls, label: str) -> Mixture:
        return cls({label: ONE})

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.weights.items() if v)

    def is_pure(self) -> bool:
        return len(self.support) == 1

    def combine(self, weight: object, other: Mixture) -> Mixture:
        """``weight * self + (1 - weight) * other``."""
        w = as_surreal(weight)
        keys = list(self.weights) + [k for k in other.weights if k not in self.weights]
        return Mixture({
            k: w * self.weights.get(k, ZERO) + (ONE - w) * other.weights.get(k, ZERO)
            for k in keys
        })

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mixture):
            return NotImplemented
        keys = set(self.weights) | set(other.weights)
        return all(self.weights.get(k, ZERO) == other.weights.get(k, ZERO) for k in keys)

    def __hash__(self) -> int:
        return hash(frozenset((k, v) for k, v in self.weights.items() if v))

    def __repr__(self) -> str:
        return "Mixture(" + ", ".join(f"{k}: {v}" for k, v in self.weights.items() if v) + ")"

    def __str__(self) -> str:
        return ", ".join(f"{k}: {v}" for k, v in self.weights.items() if v)


def mixture_eu(p: DecisionProblem, m: Mixture, eus: Mapping[str, Surreal] | None = None) -> Surreal:
    """``sum(weight(a) * EU(a))`` over the mixture's support."""
    for a in m.weights:
        if a not in p.actions:
            raise InvalidMixture(f"mixture weight on unknown action {a!r}")
    total = ZERO
    for a, w in m.weights.items():
        if w:
            eu = eus[a] if eus is not None else expected_utility(p, a)
            total = total + w * eu
    return total


def simplex_grid(actions: Sequence[str], n: int) -> list[Mixture]:
    """All mixtures with weights in multiples of ``1/n``.

    For two actions this is ``(k/n, 1 - k/n)`` for ``k = n, ..., 0``, so the
    first mixture is the pure first action.
    """
    if n < 1:
        raise ValueError("grid size must be positive")
    k = len(actions)
    out = []
    for cut in itertools.combinations(range(n + k - 1), k - 1):
        parts = []
        prev = -1
        for c in cut:
            parts.append(c - prev - 1)
            prev = c
        parts.append(n + k - 2 - prev)
        out.append(Mixture({a: from_rational(Fraction(x, n)) for a, x in zip(actions, parts)}))
    out.reverse()
    return out


def uniform_corner_mixtures(actions: Sequence[str]) -> list[Mixture]:
    """Every pure action plus the uniform mixture over each larger subset."""
    out = [Mixture.point(a) for a in actions]
    for size in range(2, len(actions) + 1):
        share = from_rational(Fraction(1, size))
        for subset in itertools.combinations(actions, size):
            out.append(Mixture({a: share for a in subset}))
    return out


def default_mixture_grid(p: DecisionProblem) -> list[Mixture]:
    if len(p.actions) == 2:
        return simplex_grid(p.actions, 32)
    return uniform_corner_mixtures(p.actions)


@dataclass(frozen=True)
class MixtureRow:
    mixture: Mixture
    eu: Surreal
    cmp_to_best: int  # compare(EU(best pure), EU(mixture))
    on_argmax: bool  # supported entirely on EU-maximal actions
    ok: bool


@dataclass(frozen=True)
class MixtureReport:
    best_actions: tuple[str, ...]
    best_eu: Surreal
    rows: tuple[MixtureRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def proper(self) -> tuple[MixtureRow, ...]:
        return tuple(r for r in self.rows if not r.mixture.is_pure())

    @property
    def violations(self) -> tuple[MixtureRow, ...]:
        return tuple(r for r in self.rows if not r.ok)

    def summary(self) -> str:
        proper = self.proper
        strict = sum(1 for r in proper if r.cmp_to_best > 0)
        best = " / ".join(self.best_actions)
        noun = "strategy" if len(self.best_actions) == 1 else "strategies"
        return (
            f"pure {noun} strictly beats {strict}/{len(proper)} proper mixtures"
            f" (best: {best})"
        )


def pure_beats_mixtures(p: DecisionProblem, grid: Iterable[Mixture] | None = None) -> MixtureReport:
    """Compare every mixture in ``grid`` with the best pure action.

    A mixture may tie the best pure action only when all of its weight sits
    on EU-maximal actions; anywhere else it must be strictly worse.
    """
    eus = expected_utilities(p)
    groups = rank(p)
    best_actions = tuple(groups[0])
    best_eu = eus[best_actions[0]]
    rows = []
    for m in (default_mixture_grid(p) if grid is None else grid):
        eu = mixture_eu(p, m, eus)
        c = compare(best_eu, eu)
        on_argmax = all(a in best_actions for a in m.support)
        ok = c == 0 if on_argmax else c > 0
        rows.append(MixtureRow(m, eu, c, on_argmax, ok))
    return MixtureReport(best_actions, best_eu, tuple(rows))
