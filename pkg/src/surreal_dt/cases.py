"""Built-in worked examples with their exact expected values.

A `CaseFixture` pairs a decision problem with named quantities it should
produce.  Quantities are small expressions over the problem::

    EU(Zeusian)                  expected utility of an action
    EU(Odinist) - EU(Raist)      sums and differences of the above
    MIX(fair)                    expected utility of a named mixture
    P(Zeus & Good, Zeus & Bad)   probability of a set of states

`run_fixture` recomputes every quantity with the decision engine and
compares it to the expectation by exact equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Sequence

from surreal_dt.decision import (
    DecisionProblem,
    Mixture,
    expected_utilities,
    mixture_eu,
    rank,
)
from surreal_dt.literal import evaluate
from surreal_dt.probability import Credence, StateSpace, prob
from surreal_dt.surreal import (
    ZERO,
    Classification,
    Surreal,
    classify,
    omega_power,
)

__all__ = [
    "CaseFixture",
    "QuantityError",
    "UnknownCase",
    "CheckRow",
    "CaseReport",
    "evaluate_quantity",
    "run_fixture",
    "run_case",
    "builtin_cases",
    "get_case",
    "perturb",
    "OFFER_EXPONENTS",
]


class UnknownCase(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"no built-in case named {self.name!r}"


class QuantityError(ValueError):
    pass


@dataclass(frozen=True)
class CaseFixture:
    name: str
    problem: DecisionProblem
    expected: Mapping[str, Surreal] = field(default_factory=dict)
    expected_ordering: tuple[tuple[str, ...], ...] | None = None
    mixtures: Mapping[str, Mixture] = field(default_factory=dict)
    classify: Mapping[str, Classification] = field(default_factory=dict)
    title: str = ""

    def __post_init__(self):
        object.__setattr__(self, "expected", MappingProxyType(dict(self.expected)))
        object.__setattr__(self, "mixtures", MappingProxyType(dict(self.mixtures)))
        object.__setattr__(self, "classify", MappingProxyType(dict(self.classify)))
        if self.expected_ordering is not None:
            ordering = tuple(tuple(g) for g in self.expected_ordering)
            named = [a for g in ordering for a in g]
            unknown = [a for a in named if a not in self.problem.actions]
            if unknown:
                raise ValueError(f"ordering names undeclared actions {unknown}")
            if len(set(named)) != len(named):
                raise ValueError("ordering names an action twice")
            object.__setattr__(self, "expected_ordering", ordering)


_QTERM = re.compile(r"\s*([+-])?\s*(EU|MIX|P)\(([^()]*)\)\s*")


def evaluate_quantity(fx: CaseFixture, text: str, eus: Mapping[str, Surreal] | None = None) -> Surreal:
    """Evaluate a quantity expression such as ``"EU(a) - EU(b)"``."""
    p = fx.problem
    if eus is None:
        eus = expected_utilities(p)
    pos = 0
    total = ZERO
    first = True
    while pos < len(text):
        m = _QTERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise QuantityError(f"cannot read quantity {text!r} at column {pos + 1}")
        sign, kind, arg = m.group(1), m.group(2), m.group(3).strip()
        if kind == "EU":
            if arg not in eus:
                raise QuantityError(f"unknown action {arg!r} in {text!r}")
            value = eus[arg]
        elif kind == "MIX":
            if arg not in fx.mixtures:
                raise QuantityError(f"unknown mixture {arg!r} in {text!r}")
            value = mixture_eu(p, fx.mixtures[arg], eus)
        else:
            labels = [s.strip() for s in arg.split(",")] if arg else []
            unknown = [s for s in labels if s not in p.space]
            if unknown:
                raise QuantityError(f"unknown states {unknown} in {text!r}")
            value = prob(p.credence, labels)
        total = total - value if sign == "-" else total + value
        first = False
        pos = m.end()
    if first:
        raise QuantityError("empty quantity")
    return total


@dataclass(frozen=True)
class CheckRow:
    quantity: str
    ok: bool
    expected: str
    actual: str
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        if self.ok:
            return f"{status} {self.quantity} = {self.actual}"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.quantity}: expected {self.expected}, got {self.actual}{extra}"


@dataclass(frozen=True)
class CaseReport:
    name: str
    rows: tuple[CheckRow, ...]
    ordering: tuple[tuple[str, ...], ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> tuple[CheckRow, ...]:
        return tuple(r for r in self.rows if not r.ok)

    def lines(self) -> list[str]:
        return [r.line() for r in self.rows]


def format_ordering(groups: Sequence[Sequence[str]]) -> str:
    return " > ".join(" = ".join(g) for g in groups)


def run_fixture(fx: CaseFixture) -> CaseReport:
    eus = expected_utilities(fx.problem)
    rows = []
    for q, want in fx.expected.items():
        try:
            got = evaluate_quantity(fx, q, eus)
        except QuantityError as exc:
            rows.append(CheckRow(q, False, str(want), "error", str(exc)))
            continue
        ok = got == want
        rows.append(CheckRow(q, ok, str(want), str(got), "" if ok else f"off by {got - want}"))
    for q, want in fx.classify.items():
        try:
            got = classify(evaluate_quantity(fx, q, eus))
        except QuantityError as exc:
            rows.append(CheckRow(f"class {q}", False, str(want), "error", str(exc)))
            continue
        rows.append(CheckRow(f"class {q}", got is want, str(want), str(got)))
    groups = tuple(tuple(g) for g in rank(fx.problem))
    if fx.expected_ordering is not None:
        want = fx.expected_ordering
        # Only the actions named in the expected ordering are compared.
        named = {a for g in want for a in g}
        got = tuple(g for g in (tuple(a for a in grp if a in named) for grp in groups) if g)
        same = tuple(frozenset(g) for g in got) == tuple(frozenset(g) for g in want)
        rows.append(CheckRow("ordering", same, format_ordering(want), format_ordering(got)))
    return CaseReport(fx.name, tuple(rows), groups)


# -- built-in fixtures ------------------------------------------------------

OFFER_EXPONENTS = range(13)


def _fixture(
    name: str,
    title: str,
    states: Sequence[str],
    credence: Sequence[str],
    rows: Mapping[str, Sequence[str]],
    expected: Mapping[str, str] = (),
    ordering: Sequence[Sequence[str]] | None = None,
    mixtures: Mapping[str, Mapping[str, str]] = (),
    classes: Mapping[str, Classification] = (),
) -> CaseFixture:
    space = StateSpace(states)
    cr = Credence(space, {s: evaluate(c) for s, c in zip(states, credence)})
    problem = DecisionProblem.from_rows(
        {a: [evaluate(u) for u in row] for a, row in rows.items()}, cr
    )
    return CaseFixture(
        name=name,
        problem=problem,
        expected={q: evaluate(v) for q, v in dict(expected).items()},
        expected_ordering=ordering,
        mixtures={k: Mixture({a: evaluate(w) for a, w in m.items()}) for k, m in dict(mixtures).items()},
        classify=dict(classes),
        title=title,
    )


COIN = ("Heads", "Tails")
INF = Classification.POSITIVE_INFINITE


def _fair(heads: str, tails: str) -> tuple[str, ...]:
    return (heads,) * 5 + (tails,) * 5


def _gambles() -> list[CaseFixture]:
    single = [
        ("G1", "Infinity or nothing", ("1/2", "1/2"), ("w", "0"), ".5*w"),
        ("G2", "Infinity or something", ("1/2", "1/2"), ("w", "10000"), ".5*w + 5000"),
        ("G3", "Infinity or bust", ("1/2", "1/2"), ("w", "-10000"), ".5*w - 5000"),
        ("G4", "Fair infinity", ("1/2", "1/2"), ("w", "-w"), ".5*w - .5*w"),
        ("G5", "Biased positive infinity", ("9/10", "1/10"), ("w", "-w"), ".9*w - .1*w"),
        ("G6", "Biased negative infinity", ("1/10", "9/10"), ("w", "-w"), ".1*w - .9*w"),
    ]
    out = [
        _fixture(name, title, COIN, cr, {name: row}, {f"EU({name})": eu})
        for name, title, cr, row, eu in single
    ]
    out.append(_fixture(
        "G1-G3", "Coin-flip gambles with a finite tails prize", COIN, ("1/2", "1/2"),
        {"G1": ("w", "0"), "G2": ("w", "10000"), "G3": ("w", "-10000")},
        {"EU(G1)": ".5*w", "EU(G2)": ".5*w + 5000", "EU(G3)": ".5*w - 5000",
         "EU(G2) - EU(G1)": "5000", "EU(G1) - EU(G3)": "5000"},
        [["G2"], ["G1"], ["G3"]],
    ))
    # Ten equally likely coin outcomes let fair and 9:1 coins share one
    # state space: a fair coin shows heads on d1..d5, the biased ones on
    # d1..d9 and on d1 alone.
    deciles = tuple(f"d{i}" for i in range(1, 11))
    out.append(_fixture(
        "G-series", "All six coin-flip gambles on one state space", deciles,
        ("1/10",) * 10,
        {
            "G1": _fair("w", "0"),
            "G2": _fair("w", "10000"),
            "G3": _fair("w", "-10000"),
            "G4": _fair("w", "-w"),
            "G5": ("w",) * 9 + ("-w",),
            "G6": ("w",) + ("-w",) * 9,
        },
        {"EU(G1)": ".5*w", "EU(G2)": ".5*w + 5000", "EU(G3)": ".5*w - 5000",
         "EU(G4)": ".5*w - .5*w", "EU(G5)": ".9*w - .1*w", "EU(G6)": ".1*w - .9*w"},
        [["G5"], ["G2"], ["G1"], ["G3"], ["G4"], ["G6"]],
    ))
    return out


def _table1() -> list[CaseFixture]:
    return [_fixture(
        "table1", "Two-option wager with a fair credence in God", ("God", "No God"),
        ("1/2", "1/2"),
        {"Christian": ("w", "10"), "Non-Christian": ("5", "10")},
        {"EU(Christian)": "1/2*w + 5", "EU(Non-Christian)": "15/2", "MIX(fair)": "1/4*w + 25/4"},
        [["Christian"], ["Non-Christian"]],
        {"fair": {"Christian": "1/2", "Non-Christian": "1/2"}},
        {"EU(Christian)": INF, "EU(Non-Christian)": Classification.FINITE_APPRECIABLE},
    )]


GODS = ("Zeus", "Athena", "Apollo", "Atheism")
RELIGIONS = ("Zeusian", "Athenian", "Apollinist", "Atheist")


def _table2() -> list[CaseFixture]:
    rows = {
        "Zeusian": ("w", "w", "-w", "100"),
        "Athenian": ("-w", "w", "-w", "100"),
        "Apollinist": ("-w", "w", "-w", "100"),
        "Atheist": ("-w", "w", "w", "100"),
    }
    return [
        _fixture(
            "table2-profile1", "Three gods, credence favoring Zeus", GODS,
            (".5", ".3", ".1", ".1"), rows,
            {"EU(Zeusian)": ".7*w + 10", "EU(Atheist)": "-.1*w + 10",
             "EU(Athenian)": "-.3*w + 10", "EU(Apollinist)": "-.3*w + 10"},
            [["Zeusian"], ["Atheist"], ["Athenian", "Apollinist"]],
        ),
        _fixture(
            "table2-profile2", "Three gods, credence favoring atheism", GODS,
            (".1", ".2", ".2", ".5"), rows,
            {"EU(Atheist)": ".3*w + 50", "EU(Zeusian)": ".1*w + 50",
             "EU(Athenian)": "-.1*w + 50", "EU(Apollinist)": "-.1*w + 50"},
            [["Atheist"], ["Zeusian"], ["Athenian", "Apollinist"]],
        ),
    ]


def _table3() -> list[CaseFixture]:
    rows = {
        "Zeusian": ("w_100", "w_0", "-w_5", "100"),
        "Athenian": ("-w_100", "w_0", "-w_5", "100"),
        "Apollinist": ("-w_100", "w_0", "-w_5", "100"),
        "Atheist": ("-w_100", "w_0", "w_137", "100"),
    }
    return [
        _fixture(
            "table3-real", "Hierarchy of infinities, real credences", GODS,
            (".5", ".3", ".1", ".1"), rows,
            {"EU(Zeusian)": ".5*w_100 + .3*w_0 - 0.1*w_5 + 10",
             "EU(Atheist)": "-.5*w_100 + .3*w_0 + 0.1*w_137 + 10"},
            [["Atheist"], ["Zeusian"], ["Athenian", "Apollinist"]],
        ),
        _fixture(
            "table3-infinitesimal", "Hierarchy of infinities, infinitesimal credence in Apollo",
            GODS, (".5", ".3", "1/w_137", "0.2 - 1/w_137"), rows,
            {"EU(Zeusian)": ".5*w_100 + .3*w_0 - w_5 / w_137 + 20 - 100/w_137",
             # The Apollo cell contributes w_137 * (1/w_137) = +1.
             "EU(Atheist)": "-.5*w_100 + .3*w_0 + 1 + 20 - 100/w_137"},
            [["Zeusian"], ["Atheist"], ["Athenian", "Apollinist"]],
        ),
    ]


GLORY = ("Zeus & Good", "Zeus & Bad", "Athena & Good", "Athena & Bad", "Atheism")


def _table5() -> list[CaseFixture]:
    return [_fixture(
        "degrees-of-glory", "Degrees of glory: the likelier god is the worse bet", GLORY,
        (".1", ".5", ".3", ".1", "0"),
        {
            "Zeusian": ("w^2", "w", "-w", "-w", "100"),
            "Athenian": ("-w", "-w", "w^2", "w", "100"),
            "Atheist": ("-w", "-w", "-w", "-w", "100"),
        },
        {"EU(Zeusian)": ".1*w^2 + .5*w - .4*w", "EU(Athenian)": ".3*w^2 + .1*w - .6*w",
         "EU(Atheist)": "-w",
         "P(Zeus & Good, Zeus & Bad)": ".6", "P(Athena & Good, Athena & Bad)": ".4"},
        [["Athenian"], ["Zeusian"], ["Atheist"]],
    )]


def offer_label(k: int) -> str:
    return f"Raist+10^{k}"


def _theresa() -> list[CaseFixture]:
    rows = {"Odinist": ("w", "0"), "Raist": ("0", "w")}
    for k in OFFER_EXPONENTS:
        rows[offer_label(k)] = (f"10^{k}", f"w + 10^{k}")
    expected = {
        "EU(Odinist)": ".6*w", "EU(Raist)": ".4*w", "EU(Odinist) - EU(Raist)": ".2*w",
    }
    classes = {"EU(Odinist) - EU(Raist)": INF}
    for k in OFFER_EXPONENTS:
        expected[f"EU({offer_label(k)})"] = f".4*w + 10^{k}"
        classes[f"EU(Odinist) - EU({offer_label(k)})"] = INF
    ordering = [["Odinist"]] + [[offer_label(k)] for k in reversed(OFFER_EXPONENTS)] + [["Raist"]]
    return [_fixture(
        "theresa", "Two omega-valued afterlives and a cash offer to switch", ("Odin", "Ra"),
        (".6", ".4"), rows, expected, ordering, classes=classes,
    )]


_BUILDERS = (_gambles, _table1, _table2, _table3, _table5, _theresa)
_CACHE: list[CaseFixture] = []


def builtin_cases() -> list[CaseFixture]:
    if not _CACHE:
        for build in _BUILDERS:
            _CACHE.extend(build())
    return list(_CACHE)


def get_case(name: str) -> CaseFixture:
    for fx in builtin_cases():
        if fx.name == name:
            return fx
    raise UnknownCase(name)


def run_case(name: str) -> CaseReport:
    return run_fixture(get_case(name))


def perturb(fx: CaseFixture, quantity: str | None = None, delta: object = None) -> CaseFixture:
    """A copy of ``fx`` whose expectation for ``quantity`` is off by ``delta``.

    Defaults: the first expected quantity, shifted by ``1/w``.  Used as a
    control showing that comparisons are exact.
    """
    if not fx.expected:
        raise ValueError(f"fixture {fx.name!r} has no expected quantities")
    quantity = quantity or next(iter(fx.expected))
    if quantity not in fx.expected:
        raise KeyError(quantity)
    shift = omega_power(-1) if delta is None else evaluate(str(delta)) if isinstance(delta, str) else delta
    expected = dict(fx.expected)
    expected[quantity] = expected[quantity] + shift
    return replace(fx, name=f"{fx.name}-perturbed", expected=expected,
                   title=f"{fx.title} (control: {quantity} shifted by {shift})")
