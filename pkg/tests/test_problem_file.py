from __future__ import annotations

from pathlib import Path

import pytest

from surreal_dt.cases import builtin_cases, get_case, run_fixture
from surreal_dt.problem_file import (
    FileFormatError,
    VnmSpec,
    dump_problem,
    dump_vnm,
    load,
    parse_problem,
    parse_vnm,
    resolve_path,
)
from surreal_dt.surreal import OMEGA
from surreal_dt.vnm import EUOracle, RelationOracle, check_axioms

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

MINIMAL = """\
states: H, T
actions: a, b
credence: { H = 1/2; T = 1/2 }
utility: {
  a = w, 0   # comment
  b = 1, 1
}
"""


def test_minimal_problem():
    fx = parse_problem(MINIMAL, "mini.problem")
    assert fx.name == "mini"
    assert fx.problem.actions == ("a", "b")
    assert fx.problem.u("a", "H") == OMEGA


@pytest.mark.parametrize("fx", builtin_cases(), ids=lambda f: f.name)
def test_round_trip_builtin(fx):
    text = dump_problem(fx)
    back = parse_problem(text)
    assert dump_problem(back) == text
    assert run_fixture(back).ok


def _error(text: str) -> FileFormatError:
    with pytest.raises(FileFormatError) as info:
        parse_problem(text, "bad.problem")
    return info.value


@pytest.mark.parametrize(
    "text, line, section, fragment",
    [
        (MINIMAL.replace("b = 1, 1", "b = 1"), 6, "utility", "1 cells for 2 states"),
        (MINIMAL.replace("b = 1, 1", "b = 1, w^"), 6, "utility", "bad value"),
        (MINIMAL.replace("b = 1, 1", "c = 1, 1"), 6, "utility", "unknown action"),
        (MINIMAL.replace("T = 1/2", "T = 1/3"), 3, "credence", "sum"),
        (MINIMAL.replace("T = 1/2", "X = 1/2"), 3, "credence", "unknown state"),
        (MINIMAL + "ordering: a > c\n", 8, "ordering", "undeclared"),
        (MINIMAL + "colour: red\n", 8, "colour", "unknown section"),
        (MINIMAL + "classify: { EU(a) = Huge }\n", 8, "classify", "unknown class"),
        (MINIMAL + "mixtures: { m = a: 1/2, b: 1/3 }\n", 8, "mixtures", "sum"),
        (MINIMAL + "states: H\n", 8, "states", "twice"),
        ("states: H, T\nactions: a, a\n", 2, "actions", "duplicate"),
        (MINIMAL.rstrip().rstrip("}"), 4, "utility", "unclosed"),
    ],
)
def test_errors_carry_line_and_section(text, line, section, fragment):
    err = _error(text)
    assert err.line is not None
    assert err.section == section
    if fragment:
        assert fragment in err.message
        assert err.line == line
    assert str(err).startswith("bad.problem:")


def test_missing_section_and_garbage():
    assert "missing section 'utility'" in _error("states: H\nactions: a\ncredence: { H = 1 }\n").message
    err = _error("just words\n")
    assert err.line == 1 and err.section is None


def test_vnm_parse_defaults_to_point_lotteries():
    spec = parse_vnm("outcomes: a, b\nutility: { a = 0; b = w }\n", "x.vnm")
    assert spec.name == "x"
    assert list(spec.lotteries) == ["a", "b"]
    assert len(spec.p_grid) == 9  # dyadic 3
    assert isinstance(spec.oracle(), EUOracle)


def test_vnm_named_lotteries_and_preferences():
    text = """\
outcomes: x, y
lotteries: {
  sure = x: 1
  coin = x: 1/2, y: 1/2
}
preference: {
  sure > coin
}
p-grid: 0, 1
"""
    spec = parse_vnm(text)
    assert isinstance(spec.oracle(), RelationOracle)
    assert spec.preference == (("sure", ">", "coin"),)
    assert dump_vnm(parse_vnm(dump_vnm(spec))) == dump_vnm(spec)


@pytest.mark.parametrize(
    "text, section",
    [
        ("outcomes: a\n", None),
        ("outcomes: a\nutility: { a = 0 }\npreference: { a = a }\n", None),
        ("outcomes: a, b\nutility: { a = 0 }\n", "utility"),
        ("outcomes: a\nutility: { b = 0 }\n", "utility"),
        ("outcomes: a\npreference: { a ? a }\n", "preference"),
        ("outcomes: a\npreference: { a < z }\n", "preference"),
        ("outcomes: a\nutility: { a = 0 }\np-grid: 0, 2\n", "p-grid"),
        ("outcomes: a\nlotteries: { l = a: 1/2 }\nutility: { a = 0 }\n", "lotteries"),
    ],
)
def test_vnm_errors(text, section):
    with pytest.raises(FileFormatError) as info:
        parse_vnm(text, "bad.vnm")
    assert info.value.section == section


def test_resolve_path_and_load(tmp_path):
    assert resolve_path(FIXTURES / "table1").name == "table1.problem"
    assert resolve_path(FIXTURES / "vnm-omega").name == "vnm-omega.vnm"
    with pytest.raises(FileNotFoundError):
        resolve_path(tmp_path / "nothing")
    assert isinstance(load(FIXTURES / "vnm-omega"), VnmSpec)
    assert load(FIXTURES / "table1").name == "table1"


# -- golden files -------------------------------------------------------------


@pytest.mark.parametrize("fx", builtin_cases(), ids=lambda f: f.name)
def test_golden_fixture_file_matches_builtin(fx):
    path = FIXTURES / f"{fx.name}.problem"
    assert path.read_text(encoding="utf-8") == dump_problem(fx)


def test_no_stray_problem_files():
    names = {p.stem for p in FIXTURES.glob("*.problem")}
    assert names == {fx.name for fx in builtin_cases()}


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.vnm")), ids=lambda p: p.stem)
def test_golden_vnm_round_trip(path):
    text = path.read_text(encoding="utf-8")
    assert dump_vnm(parse_vnm(text, str(path))) == text


def test_golden_vnm_verdicts():
    three = load(FIXTURES / "vnm-3outcomes")
    assert check_axioms(three.oracle(), three.sample(), three.p_grid).ok
    cyc = load(FIXTURES / "vnm-intransitive")
    assert not check_axioms(cyc.oracle(), cyc.sample(), cyc.p_grid)["Transitivity"].passed


def test_control_fixture_fails():
    fx = load(FIXTURES / "controls" / "table2-profile1-perturbed")
    report = run_fixture(fx)
    assert not report.ok
    assert [r.quantity for r in report.failures] == ["EU(Zeusian)"]
    assert fx.problem.actions == get_case("table2-profile1").problem.actions
