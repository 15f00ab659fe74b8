import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from cmgirth.casefile import CaseFile, format_case, parse_case, read_case
from cmgirth.cli import main
from cmgirth.errors import InputError
from cmgirth.girth import analyze_case
from cmgirth.poly import Field, PolyRing

NON_CM_CASE = """\
# the non-CM example
case non_cm
field F 32003
ring x y
ideal I: x^2, x*y
ideal a: x, y
expect e 1
expect N 2
"""


def test_minimal_file():
    case = parse_case("field Q\nring x\n")
    assert case.I == () and case.a is None and str(case.ring.field) == "Q"


def test_round_trip():
    case = parse_case(NON_CM_CASE)
    text = format_case(case)
    assert parse_case(text) == case
    assert format_case(parse_case(text)) == text


@pytest.mark.parametrize("text, line, column", [
    ("field F 4\nring x\n", 1, 9),
    ("field Q\nring x y\nideal I: x^2, z\n", 3, 15),
    ("field Q\nring x y\nideal I: x^2 +\n", 3, 15),
    ("field Q\nring x\nbogus\n", 3, 1),
    ("field Q\nring x\nexpect colour 3\n", 3, 1),
    ("field Q\nring x y\nideal a: x^2 + y\n", 3, 9),
])
def test_parse_errors(text, line, column):
    with pytest.raises(InputError) as info:
        parse_case(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_missing_ring():
    with pytest.raises(InputError, match="ring"):
        parse_case("field Q\n")


names = st.sampled_from([("x",), ("x", "y"), ("x", "y", "z")])


@settings(max_examples=40, deadline=None)
@given(names, st.data())
def test_round_trip_random(variables, data):
    ring = PolyRing(Field(32003), variables)
    n = len(variables)
    deg = data.draw(st.integers(1, 3))
    expo = st.lists(st.integers(0, deg), min_size=n, max_size=n).filter(
        lambda e: sum(e) == deg).map(tuple)
    poly = st.lists(st.tuples(st.integers(-9, 9), expo), min_size=1, max_size=3).map(
        ring.from_terms).filter(bool)
    I = tuple(data.draw(st.lists(poly, max_size=3)))
    a = tuple(data.draw(st.lists(poly, max_size=2)))
    case = CaseFile(ring, I, a, None, {"dim": data.draw(st.integers(0, 3))}, "c1")
    assert parse_case(format_case(case)) == case


# ---------------------------------------------------------------- commands

@pytest.fixture
def case_file(tmp_path):
    p = tmp_path / "non_cm.case"
    p.write_text(NON_CM_CASE)
    return p


def test_invariants_json(case_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["invariants", str(case_file), "--json", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["invariants"]["e"] == 1 and rec["invariants"]["N"] == 2
    assert rec["invariants"]["mu"] == 2 and rec["invariants"]["cm"] is False
    assert set(rec) >= {"case_id", "ring", "invariants", "checks", "seed", "version"}
    assert rec["ring"] == {"field": "F 32003", "order": "degrevlex", "vars": ["x", "y"]}


def test_verify_and_exit_codes(case_file, tmp_path, capsys):
    assert main(["verify", str(case_file)]) == 0
    assert "cm1_local" in capsys.readouterr().out
    bad = tmp_path / "bad.case"
    bad.write_text("field F 4\nring x\n")
    assert main(["verify", str(bad)]) == 2
    h3 = tmp_path / "h3.case"
    h3.write_text("field F 32003\nring x y z w\nideal a: x, y, z\n")
    assert main(["verify", str(h3)]) == 0
    assert main(["verify", str(h3), "--strict"]) == 3
    wrong = tmp_path / "wrong.case"
    wrong.write_text("field Q\nring x y\nideal I: x^2\nexpect e 5\n")
    assert main(["verify", str(wrong)]) == 1


def test_bound_command(capsys):
    assert main(["bound", "thm1-1", "--f", "2", "--d", "3"]) == 0
    assert capsys.readouterr().out.strip() == "11"
    main(["bound", "global", "--d", "5", "--N", "1", "--h", "2", "--tau", "1"])
    assert capsys.readouterr().out.strip() == "6"
    main(["bound", "forster-swan", "--F", "4", "--d", "3", "--dim", "1"])
    assert capsys.readouterr().out.strip() == "5"
    assert main(["bound", "global", "--d", "2", "--h", "3"]) == 2


def test_other_commands(case_file, tmp_path, capsys):
    assert main(["resolve", str(case_file)]) == 0
    assert "total: 1 2 1" in capsys.readouterr().out
    out = tmp_path / "h.json"
    assert main(["hilbert", str(case_file), "--json", str(out)]) == 0
    assert json.loads(out.read_text())["e"] == 1
    out = tmp_path / "n.json"
    assert main(["noether", str(case_file), "--json", str(out)]) == 0
    assert json.loads(out.read_text())["basis"] == ["1", "x"]


def test_corpus_directory(case_file, tmp_path, capsys):
    out = tmp_path / "c.json"
    csv_out = tmp_path / "c.csv"
    assert main(["corpus", str(case_file.parent), "--json", str(out), "--csv", str(csv_out)]) == 0
    report = json.loads(out.read_text())
    assert [c["case_id"] for c in report["cases"]] == ["non_cm"]
    assert csv_out.read_text().startswith("case_id,field,vars")
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["corpus", str(empty)]) == 0


def test_corpus_emit(tmp_path, capsys):
    emit = tmp_path / "cases"
    assert main(["corpus", "--generate", "6", "--emit", str(emit), "--trials", "2"]) == 0
    files = sorted(emit.glob("*.case"))
    assert len(files) == 6
    out = tmp_path / "again.json"
    assert main(["corpus", str(emit), "--trials", "2", "--json", str(out)]) == 0
    assert len(json.loads(out.read_text())["cases"]) == 6


def test_unknown_command():
    assert main(["frobnicate"]) == 2


def test_shipped_cases_meet_expectations():
    files = sorted((Path(__file__).parent.parent / "cases").glob("*.case"))
    assert files
    for path in files:
        rec = analyze_case(read_case(path))
        assert rec.expectations and all(e["pass"] for e in rec.expectations), path.name
        assert rec.status != "fail"
