"""Plain-text file formats for decision problems and preference tables.

Decision problems (``.problem``)::

    # comments run to end of line
    name: table1
    title: Two-option wager
    states: God, No God
    actions: Christian, Non-Christian
    credence: {
      God = 1/2
      No God = 1/2
    }
    utility: {
      Christian = w, 10
      Non-Christian = 5, 10
    }
    mixtures: {                       # optional
      fair = Christian: 1/2, Non-Christian: 1/2
    }
    expected: {                       # optional
      EU(Christian) = 1/2*w + 5
    }
    classify: {                       # optional
      EU(Christian) = PositiveInfinite
    }
    ordering: Christian > Non-Christian   # optional, '=' for ties

Block entries are separated by newlines or ``;`` so a block can also sit on
one line: ``credence: { H = 1/2; T = 1/2 }``.  Every number is a surreal
literal.

Preference tables (``.vnm``) use the same layout with ``outcomes:``, either
``utility: { outcome = value }`` or ``preference: { x > y; y = z }``, an
optional ``lotteries: { name = a: 1/2, b: 1/2 }`` (default: one point
lottery per outcome, named after it) and ``p-grid:`` (a list of weights or
``dyadic N``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from surreal_dt.cases import CaseFixture, format_ordering
from surreal_dt.decision import DecisionProblem, InvalidMixture, InvalidProblem, Mixture
from surreal_dt.literal import evaluate, format_surreal
from surreal_dt.probability import Credence, ProbabilityError, StateSpace
from surreal_dt.surreal import Classification, Surreal, SurrealError
from surreal_dt.vnm import EUOracle, Lottery, RelationOracle, dyadic_grid

__all__ = [
    "FileFormatError",
    "VnmSpec",
    "parse_problem",
    "dump_problem",
    "parse_vnm",
    "dump_vnm",
    "load",
    "resolve_path",
]


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, section: str | None = None,
                 source: str = "<text>"):
        where = source
        if line is not None:
            where += f":{line}"
        if section:
            where += f" [{section}]"
        super().__init__(f"{where}: {message}")
        self.message = message
        self.line = line
        self.section = section
        self.source = source


@dataclass
class _Section:
    key: str
    line: int
    value: str = ""
    entries: list[tuple[int, str]] = field(default_factory=list)
    block: bool = False


_KEY = re.compile(r"^([A-Za-z][A-Za-z-]*)\s*:\s*(.*)$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return (line if i < 0 else line[:i]).strip()


def _split_entries(lineno: int, text: str) -> list[tuple[int, str]]:
    return [(lineno, part.strip()) for part in text.split(";") if part.strip()]


def _sections(text: str, source: str) -> dict[str, _Section]:
    out: dict[str, _Section] = {}
    current: _Section | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line:
            continue
        if current is not None:
            if line.endswith("}"):
                current.entries += _split_entries(lineno, line[:-1])
                current = None
            else:
                current.entries += _split_entries(lineno, line)
            continue
        m = _KEY.match(line)
        if not m:
            raise FileFormatError(f"expected 'key: value', got {line!r}", lineno, source=source)
        key, rest = m.group(1).lower(), m.group(2).strip()
        if key in out:
            raise FileFormatError(f"section {key!r} given twice", lineno, key, source)
        sec = _Section(key, lineno)
        out[key] = sec
        if rest.startswith("{"):
            sec.block = True
            body = rest[1:].strip()
            if body.endswith("}"):
                sec.entries = _split_entries(lineno, body[:-1])
            else:
                sec.entries = _split_entries(lineno, body)
                current = sec
        else:
            sec.value = rest
    if current is not None:
        raise FileFormatError("unclosed '{'", current.line, current.key, source)
    return out


class _Ctx:
    def __init__(self, sections: dict[str, _Section], source: str, allowed: Iterable[str]):
        self.s = sections
        self.source = source
        unknown = set(sections) - set(allowed)
        if unknown:
            key = min(unknown, key=lambda k: sections[k].line)
            raise self.error(f"unknown section {key!r}", sections[key].line, key)

    def error(self, msg: str, line: int | None = None, section: str | None = None) -> FileFormatError:
        return FileFormatError(msg, line, section, self.source)

    def scalar(self, key: str, required: bool = True, default: str = "") -> str:
        sec = self.s.get(key)
        if sec is None:
            if required:
                raise self.error(f"missing section {key!r}")
            return default
        if sec.block:
            raise self.error("expected a single line, not a block", sec.line, key)
        return sec.value

    def labels(self, key: str) -> list[str]:
        value = self.scalar(key)
        items = [x.strip() for x in value.split(",")]
        if not value or any(not x for x in items):
            raise self.error("expected a comma-separated list of names", self.s[key].line, key)
        if len(set(items)) != len(items):
            raise self.error("duplicate name", self.s[key].line, key)
        for x in items:
            _check_label(self, x, self.s[key].line, key)
        return items

    def block(self, key: str, required: bool = True) -> list[tuple[int, str, str]]:
        sec = self.s.get(key)
        if sec is None:
            if required:
                raise self.error(f"missing section {key!r}")
            return []
        if not sec.block:
            raise self.error("expected a '{ ... }' block", sec.line, key)
        out = []
        for lineno, entry in sec.entries:
            if "=" not in entry:
                raise self.error(f"expected 'name = value', got {entry!r}", lineno, key)
            lhs, rhs = entry.split("=", 1)
            out.append((lineno, lhs.strip(), rhs.strip()))
        return out

    def literal(self, text: str, line: int, key: str) -> Surreal:
        try:
            return evaluate(text)
        except (SurrealError, ZeroDivisionError) as exc:
            raise self.error(f"bad value {text!r}: {exc}", line, key) from None


_BAD_LABEL = re.compile(r"[,=:;{}()<>#]")


def _check_label(ctx: _Ctx, label: str, line: int, key: str) -> None:
    if not label or _BAD_LABEL.search(label):
        raise ctx.error(f"invalid name {label!r}", line, key)


def _mixture_weights(ctx: _Ctx, text: str, line: int, key: str) -> dict[str, Surreal]:
    weights = {}
    for part in text.split(","):
        if ":" not in part:
            raise ctx.error(f"expected 'label: weight', got {part.strip()!r}", line, key)
        label, w = (x.strip() for x in part.split(":", 1))
        if label in weights:
            raise ctx.error(f"{label!r} weighted twice", line, key)
        weights[label] = ctx.literal(w, line, key)
    return weights


def _parse_ordering(ctx: _Ctx, text: str, line: int) -> tuple[tuple[str, ...], ...]:
    groups = []
    for grp in text.split(">"):
        names = tuple(x.strip() for x in grp.split("="))
        if any(not n for n in names):
            raise ctx.error(f"malformed ordering {text!r}", line, "ordering")
        groups.append(names)
    return tuple(groups)


_PROBLEM_KEYS = ("name", "title", "states", "actions", "credence", "utility",
                 "mixtures", "expected", "classify", "ordering")


def parse_problem(text: str, source: str = "<text>") -> CaseFixture:
    ctx = _Ctx(_sections(text, source), source, _PROBLEM_KEYS)
    states = ctx.labels("states")
    actions = ctx.labels("actions")

    mass = {}
    for line, s, v in ctx.block("credence"):
        if s not in states:
            raise ctx.error(f"unknown state {s!r}", line, "credence")
        if s in mass:
            raise ctx.error(f"state {s!r} given twice", line, "credence")
        mass[s] = ctx.literal(v, line, "credence")
    try:
        cr = Credence(StateSpace(states), mass)
    except ProbabilityError as exc:
        raise ctx.error(str(exc), ctx.s["credence"].line, "credence") from None

    rows: dict[str, list[Surreal]] = {}
    for line, a, v in ctx.block("utility"):
        if a not in actions:
            raise ctx.error(f"unknown action {a!r}", line, "utility")
        if a in rows:
            raise ctx.error(f"row {a!r} given twice", line, "utility")
        cells = [c.strip() for c in v.split(",")]
        if len(cells) != len(states):
            raise ctx.error(f"row {a!r} has {len(cells)} cells for {len(states)} states",
                            line, "utility")
        rows[a] = [ctx.literal(c, line, "utility") for c in cells]
    missing = [a for a in actions if a not in rows]
    if missing:
        raise ctx.error(f"no utility row for {', '.join(missing)}", ctx.s["utility"].line, "utility")
    try:
        problem = DecisionProblem.from_rows({a: rows[a] for a in actions}, cr)
    except InvalidProblem as exc:
        raise ctx.error(str(exc), ctx.s["utility"].line, "utility") from None

    mixtures = {}
    for line, name, v in ctx.block("mixtures", required=False):
        weights = _mixture_weights(ctx, v, line, "mixtures")
        unknown = [a for a in weights if a not in actions]
        if unknown:
            raise ctx.error(f"unknown action {unknown[0]!r}", line, "mixtures")
        try:
            mixtures[name] = Mixture(weights)
        except InvalidMixture as exc:
            raise ctx.error(str(exc), line, "mixtures") from None

    expected = {}
    for line, q, v in ctx.block("expected", required=False):
        expected[q] = ctx.literal(v, line, "expected")

    classes = {}
    for line, q, v in ctx.block("classify", required=False):
        try:
            classes[q] = Classification(v)
        except ValueError:
            names = ", ".join(c.value for c in Classification)
            raise ctx.error(f"unknown class {v!r} (one of {names})", line, "classify") from None

    ordering = None
    if "ordering" in ctx.s:
        line = ctx.s["ordering"].line
        ordering = _parse_ordering(ctx, ctx.scalar("ordering"), line)
    try:
        return CaseFixture(
            name=ctx.scalar("name", required=False, default=Path(source).stem),
            title=ctx.scalar("title", required=False),
            problem=problem,
            expected=expected,
            expected_ordering=ordering,
            mixtures=mixtures,
            classify=classes,
        )
    except ValueError as exc:
        line = ctx.s["ordering"].line if "ordering" in ctx.s else None
        raise ctx.error(str(exc), line, "ordering") from None


def _block(key: str, lines: Iterable[str]) -> list[str]:
    return [f"{key}: {{", *(f"  {x}" for x in lines), "}"]


def dump_problem(fx: CaseFixture) -> str:
    p = fx.problem
    out = [f"name: {fx.name}"]
    if fx.title:
        out.append(f"title: {fx.title}")
    out.append("states: " + ", ".join(p.states))
    out.append("actions: " + ", ".join(p.actions))
    out += _block("credence", (f"{s} = {format_surreal(p.credence[s])}" for s in p.states))
    out += _block("utility", (
        f"{a} = " + ", ".join(format_surreal(u) for u in p.row(a)) for a in p.actions
    ))
    if fx.mixtures:
        out += _block("mixtures", (f"{k} = {m}" for k, m in fx.mixtures.items()))
    if fx.expected:
        out += _block("expected", (f"{q} = {format_surreal(v)}" for q, v in fx.expected.items()))
    if fx.classify:
        out += _block("classify", (f"{q} = {c}" for q, c in fx.classify.items()))
    if fx.expected_ordering is not None:
        out.append("ordering: " + format_ordering(fx.expected_ordering))
    return "\n".join(out) + "\n"


# -- preference tables ------------------------------------------------------


@dataclass(frozen=True)
class VnmSpec:
    name: str
    outcomes: tuple[str, ...]
    lotteries: Mapping[str, Lottery]
    p_grid: tuple[Surreal, ...]
    utility: Mapping[str, Surreal] | None = None
    preference: tuple[tuple[str, str, str], ...] | None = None
    title: str = ""

    def oracle(self) -> EUOracle | RelationOracle:
        if self.utility is not None:
            return EUOracle(self.utility)
        return RelationOracle(self.lotteries, self.preference or ())

    def sample(self) -> list[Lottery]:
        return list(self.lotteries.values())


_PREF = re.compile(r"^(.+?)\s*(<=|>=|<|>|=|~)\s*(.+)$")
_VNM_KEYS = ("name", "title", "outcomes", "utility", "preference", "lotteries", "p-grid")


def parse_vnm(text: str, source: str = "<text>") -> VnmSpec:
    ctx = _Ctx(_sections(text, source), source, _VNM_KEYS)
    outcomes = ctx.labels("outcomes")
    has_u, has_p = "utility" in ctx.s, "preference" in ctx.s
    if has_u == has_p:
        raise ctx.error("give exactly one of 'utility' and 'preference'")

    lotteries: dict[str, Lottery] = {}
    entries = ctx.block("lotteries", required=False)
    if not entries:
        lotteries = {o: Lottery.point(outcomes, o) for o in outcomes}
        lotteries = {o: Lottery(lot.outcomes, lot.probs, o) for o, lot in lotteries.items()}
    for line, name, v in entries:
        _check_label(ctx, name, line, "lotteries")
        if name in lotteries:
            raise ctx.error(f"lottery {name!r} given twice", line, "lotteries")
        try:
            lotteries[name] = Lottery.from_mapping(outcomes, _mixture_weights(ctx, v, line, "lotteries"), name)
        except (KeyError, ValueError) as exc:
            raise ctx.error(str(exc).strip("'\""), line, "lotteries") from None

    utility = None
    preference = None
    if has_u:
        utility = {}
        for line, o, v in ctx.block("utility"):
            if o not in outcomes:
                raise ctx.error(f"unknown outcome {o!r}", line, "utility")
            utility[o] = ctx.literal(v, line, "utility")
        missing = [o for o in outcomes if o not in utility]
        if missing:
            raise ctx.error(f"no utility for {', '.join(missing)}", ctx.s["utility"].line, "utility")
    else:
        sec = ctx.s["preference"]
        if not sec.block:
            raise ctx.error("expected a '{ ... }' block", sec.line, "preference")
        preference = []
        for line, entry in sec.entries:
            m = _PREF.match(entry)
            if not m:
                raise ctx.error(f"expected 'x > y', 'x < y' or 'x = y', got {entry!r}",
                                line, "preference")
            a, op, b = m.group(1).strip(), m.group(2), m.group(3).strip()
            for n in (a, b):
                if n not in lotteries:
                    raise ctx.error(f"unknown lottery {n!r}", line, "preference")
            preference.append((a, op, b))
        preference = tuple(preference)
        try:
            RelationOracle(lotteries, preference)
        except ValueError as exc:
            raise ctx.error(str(exc), sec.line, "preference") from None

    grid_text = ctx.scalar("p-grid", required=False, default="dyadic 3")
    line = ctx.s["p-grid"].line if "p-grid" in ctx.s else None
    m = re.fullmatch(r"dyadic\s+(\d+)", grid_text)
    if m:
        grid = tuple(dyadic_grid(int(m.group(1))))
    else:
        grid = tuple(ctx.literal(x.strip(), line, "p-grid") for x in grid_text.split(","))
        if any(p < 0 or p > 1 for p in grid):
            raise ctx.error("weights must lie in [0, 1]", line, "p-grid")

    return VnmSpec(
        name=ctx.scalar("name", required=False, default=Path(source).stem),
        title=ctx.scalar("title", required=False),
        outcomes=tuple(outcomes),
        lotteries=lotteries,
        p_grid=grid,
        utility=utility,
        preference=preference,
    )


def dump_vnm(spec: VnmSpec) -> str:
    out = [f"name: {spec.name}"]
    if spec.title:
        out.append(f"title: {spec.title}")
    out.append("outcomes: " + ", ".join(spec.outcomes))
    points = list(spec.lotteries) == list(spec.outcomes) and all(
        lot == Lottery.point(spec.outcomes, name) for name, lot in spec.lotteries.items()
    )
    if not points:
        out += _block("lotteries", (
            f"{name} = " + ", ".join(
                f"{o}: {format_surreal(p)}" for o, p in zip(lot.outcomes, lot.probs) if p
            )
            for name, lot in spec.lotteries.items()
        ))
    if spec.utility is not None:
        out += _block("utility", (f"{o} = {format_surreal(u)}" for o, u in spec.utility.items()))
    else:
        out += _block("preference", (f"{a} {op} {b}" for a, op, b in spec.preference or ()))
    out.append("p-grid: " + ", ".join(format_surreal(p) for p in spec.p_grid))
    return "\n".join(out) + "\n"


# -- files ------------------------------------------------------------------

SUFFIXES = (".problem", ".vnm")


def resolve_path(path: str | Path) -> Path:
    """``path`` itself if it exists, else ``path`` plus a known suffix."""
    p = Path(path)
    if p.exists():
        return p
    for suffix in SUFFIXES:
        q = p.with_name(p.name + suffix)
        if q.exists():
            return q
    raise FileNotFoundError(f"no such file: {path}")


def load(path: str | Path) -> CaseFixture | VnmSpec:
    p = resolve_path(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".vnm":
        return parse_vnm(text, str(p))
    return parse_problem(text, str(p))
