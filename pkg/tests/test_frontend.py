import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from kmut.frontend.ast import (
    Assert,
    AtomF,
    AtomO,
    AtomOe,
    Eval,
    Let,
    Mutate,
    Name,
    Print,
    Scale,
    Script,
    Serre,
    SpaceDecl,
    Sum,
    to_source,
)
from kmut.frontend.cli import main
from kmut.frontend.evaluator import EvalError, evaluate
from kmut.frontend.lexer import ParseError, tokenize
from kmut.frontend.parser import parse

SCRIPTS = sorted(p for p in resources.files("kmut").joinpath("scripts").iterdir() if p.name.endswith(".kmut"))

REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "results", "summary"],
    "properties": {
        "suite": {"type": "string"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status", "expected", "actual", "ref"],
                "properties": {
                    "id": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "error"]},
                    "expected": {"type": ["number", "null"]},
                    "actual": {"type": ["number", "null"]},
                    "ref": {"type": "string"},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["pass", "fail", "error"],
            "properties": {k: {"type": "integer"} for k in ("pass", "fail", "error")},
        },
    },
}


# -- lexer -------------------------------------------------------------------


def test_tokenize_atom():
    toks = [(t.kind, t.lexeme) for t in tokenize("O(2,1|-1)")[:-1]]
    assert toks == [
        ("ident", "O"), ("punct", "("), ("int", "2"), ("punct", ","),
        ("int", "1"), ("punct", "|"), ("int", "-1"), ("punct", ")"),
    ]


def test_tokenize_comment_only():
    assert [t.kind for t in tokenize("# comment\n")] == ["eof"]


def test_binary_minus_is_not_a_literal():
    kinds = [t.kind for t in tokenize("a -1*b")[:-1]]
    assert kinds == ["ident", "punct", "int", "punct", "ident"]


def test_non_ascii_identifier():
    with pytest.raises(ParseError) as info:
        tokenize("let ξ")
    assert info.value.line == 1 and info.value.column == 5


def test_positions_are_one_based():
    toks = tokenize("space H\n  let")
    assert (toks[0].line, toks[0].column) == (1, 1)
    assert (toks[2].line, toks[2].column) == (2, 3)


# -- parser ------------------------------------------------------------------


def test_assert_statement():
    script = parse("space H\nlet c = F(0)\nassert chiY(c) == -137")
    stmt = script.statements[-1]
    assert isinstance(stmt, Assert) and stmt.expected == -137
    assert stmt.expr == Eval("chiY", (Name("c"),))


def test_missing_mutator_list():
    with pytest.raises(ParseError) as info:
        parse("space H\nlet c = F(0)\nprint lmut(c)")
    assert "expected ';'" in str(info.value)
    assert (info.value.line, info.value.column) == (3, 13)


@pytest.mark.parametrize(
    "source, fragment",
    [
        ("space P\nprint F(0)", "only exist on space H"),
        ("space P4xP1\nprint O(1,1|2)", "no exceptional divisor"),
        ("space P4xP1\nprint Oe(0)", "no exceptional divisor"),
        ("space H\nprint O(1)", "needs 2 degree"),
        ("space P\nprint O(1,1)", "needs 1 degree"),
        ("space Q", "unknown space"),
        ("let x = O(0)", "expected 'space'"),
        ("space H\nassert gram(O(0,0)) == 1", "cannot be asserted"),
        ("space H\nprint x", "undefined name"),
        ("space H\nprint serre(O(0,0), 2)", "+1 or -1"),
        ("space H\nassert chi(O(0,0)) == 1", "takes 2 argument"),
        ("space H\nprint 3 O(0,0)", "expected '*'"),
        ("space H\nprint O(0,0) $", "invalid character"),
    ],
)
def test_parse_errors(source, fragment):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert fragment in str(info.value)
    assert info.value.line >= 1 and info.value.column >= 1


def test_single_term_is_not_wrapped():
    (stmt,) = parse("space H\nprint O(1,0|-1)").statements
    assert stmt.expr == AtomO((1, 0), -1)


@pytest.mark.parametrize("path", SCRIPTS, ids=lambda p: p.name)
def test_shipped_scripts_round_trip(path):
    tree = parse(path.read_text(encoding="utf-8"))
    assert parse(to_source(tree)) == tree


def test_four_scripts_shipped():
    assert [p.name for p in SCRIPTS] == ["hom_table.kmut", "route_left.kmut", "route_right.kmut", "sod_checks.kmut"]


# randomized ASTs on H, printed and re-parsed

ints = st.integers(-9, 9)
atoms = st.one_of(
    st.builds(AtomO, st.tuples(ints, ints), st.one_of(st.none(), ints)),
    st.builds(AtomF, ints),
    st.builds(AtomOe, ints),
    st.builds(AtomOe, ints, st.tuples(ints, ints)),
)


def _extend(children):
    prim = st.one_of(
        children,
        st.builds(Mutate, st.sampled_from(["lmut", "rmut"]), children, st.lists(children, min_size=1, max_size=3).map(tuple)),
        st.builds(Serre, children, st.sampled_from([1, -1])),
    )
    term = st.one_of(prim, st.builds(Scale, ints, prim.filter(lambda n: not isinstance(n, Scale))))
    summed = st.lists(st.tuples(st.sampled_from(["+", "-"]), term), min_size=2, max_size=4).map(
        lambda ts: Sum((("+", ts[0][1]),) + tuple(ts[1:]))
    )
    return st.one_of(prim, term, summed)


class_exprs = st.recursive(atoms, _extend, max_leaves=8)


@st.composite
def scripts(draw):
    stmts = []
    for i in range(draw(st.integers(1, 4))):
        expr = draw(class_exprs)
        stmts.append(Let(f"v{i}", expr))
    names = [Name(s.name) for s in stmts]
    arg = st.one_of(class_exprs, st.sampled_from(names))
    stmts.append(Print(draw(arg)))
    stmts.append(Assert(Eval("chi", (draw(arg), draw(arg))), draw(ints)))
    stmts.append(Print(Eval("gram", tuple(draw(st.lists(arg, min_size=1, max_size=3))))))
    return Script(SpaceDecl("H"), tuple(stmts))


@settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])
@given(scripts())
def test_fuzz_round_trip(script):
    text = to_source(script)
    assert parse(text) == script
    assert to_source(parse(text)) == text


# -- evaluator -----------------------------------------------------------------


def test_route_left_script_prints_value():
    path = next(p for p in SCRIPTS if p.name == "route_left.kmut")
    report = evaluate(parse(path.read_text(encoding="utf-8")))
    assert "-137" in report.outputs
    assert report.passed


def test_simple_pairing_script():
    report = evaluate(parse("space H\nassert chi(O(0,0), O(1,0)) == 6"))
    assert report.passed and report.assertions[0].actual == 6


def test_failed_assert_keeps_going():
    report = evaluate(parse("space H\nassert chiH(O(0,0)) == 2\nprint chiH(O(1,0))"))
    assert not report.passed
    assert report.outputs == ["6"]


def test_fiber_pairing_runtime_error():
    with pytest.raises(EvalError) as info:
        evaluate(parse("space H\nprint chi(F(0), F(1))"))
    assert info.value.span.line == 2


def test_traces():
    report = evaluate(parse("space H\nprint lmut(F(0); Oe(-1), O(2,0))"))
    (rec,) = report.traces
    assert [s.computed_chi for s in rec.steps] == [0, 1]


# -- CLI -------------------------------------------------------------------------


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_chi(capsys):
    assert run_cli(capsys, "chi", "H", "O(2,1|-1)", "O(4,1|-2)") == (0, "20\n", "")


def test_cli_chow(capsys):
    assert run_cli(capsys, "chow", "euler-ci", "P4xP1", "2,1", "3,1")[:2] == (0, "-128\n")
    assert run_cli(capsys, "chow", "integrate", "P4", "(2*h)^2*(3*h)^2")[:2] == (0, "36\n")
    assert run_cli(capsys, "chow", "integrate", "P2xP1", "33/2*h^2*t")[:2] == (0, "33/2\n")
    code, out, _ = run_cli(capsys, "chow", "porteous", "P2", "--source", "0", "0", "0", "--target", "2", "2", "--rank", "1")
    assert (code, out) == (0, "12\n")


@pytest.mark.parametrize(
    "argv, code",
    [
        (["chi", "H", "F(0)", "F(1)"], 3),
        (["chi", "H", "O(1)", "F(1)"], 2),
        (["chi", "Q", "O(1)", "O(1)"], 2),
        (["chow", "integrate", "P4", "q"], 2),
        (["chow", "integrate", "P4x", "h"], 2),
        (["chow", "euler-ci", "P1", "1", "1"], 3),
        (["frobnicate"], 2),
        (["verify", "--filter", "nothing-matches"], 2),
    ],
)
def test_cli_failure_codes(capsys, argv, code):
    got, _, err = run_cli(capsys, *argv)
    assert got == code
    assert err


@pytest.mark.parametrize("path", SCRIPTS, ids=lambda p: p.name)
def test_cli_runs_shipped_scripts(capsys, path):
    assert run_cli(capsys, "run", str(path))[0] == 0


@pytest.mark.parametrize(
    "source, position",
    [
        ("space H\nlet c = O(0,0)\nprint lmut(c)\n", "3:13"),
        ("space H\nprint O(1,2,3)\n", "2:7"),
        ("space H\nlet = O(0,0)\n", "2:5"),
        ("space H\nprint chi(O(0,0), O(1,0)\n", "3:1"),
    ],
)
def test_cli_malformed_scripts(capsys, tmp_path, source, position):
    path = tmp_path / "bad.kmut"
    path.write_text(source, encoding="utf-8")
    code, out, err = run_cli(capsys, "run", str(path))
    assert code == 2 and out == ""
    assert f"bad.kmut:{position}:" in err


def test_cli_math_error_exit(capsys, tmp_path):
    path = tmp_path / "fib.kmut"
    path.write_text("space H\nprint chi(F(0), F(1))\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 3 and "fib.kmut:2:7:" in err


def test_cli_failed_assert_exit(capsys, tmp_path):
    path = tmp_path / "wrong.kmut"
    path.write_text("space H\nassert chiH(O(0,0)) == 2\n", encoding="utf-8")
    code, out, _ = run_cli(capsys, "run", str(path))
    assert code == 1 and "FAIL" in out


def test_cli_run_json_and_trace(capsys):
    path = next(p for p in SCRIPTS if p.name == "route_left.kmut")
    code, out, _ = run_cli(capsys, "run", str(path), "--json", "--trace")
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert code == 0 and doc["summary"]["fail"] == 0
    chis = [s.get("chi") for rec in doc["trace"] for s in rec["steps"]]
    assert chis == [0, 0, 1, -5, 10, None, -4, 1, 1, -4]


def test_cli_verify_json_schema_and_stability(capsys):
    code1, out1, _ = run_cli(capsys, "verify", "--json")
    code2, out2, _ = run_cli(capsys, "verify", "--json", "--workers", "3")
    assert out1 == out2
    doc = json.loads(out1)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["summary"] == {"pass": len(doc["results"]) - 1, "fail": 1, "error": 0}
    # the disputed hom-table entry is the only red line
    assert code1 == 1
    disc = next(r for r in doc["results"] if r["id"] == "counts.discriminant")
    assert disc["expected"] is None and disc["expected_repr"] == "(6, 4)"


def test_cli_verify_filter_text(capsys):
    code, out, _ = run_cli(capsys, "verify", "--filter", "route")
    assert code == 0
    assert out.strip().endswith("all scenarios pass (3)")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kmut", "chi", "H", "O(0,0)", "O(2,0)"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "21\n"
