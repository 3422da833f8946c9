import io
import json

import jsonschema
import pytest

from brinkmann.cli import REPORT_SCHEMA, run

IDENTITY = "2 2\na1 -> a1 | 1\na2 -> a2 | 1\nb1 -> 1 | b1\nb2 -> 1 | b2\n"
TYPE_I = "2 2\na1 -> a1 | b1\na2 -> a1 | b1\nb1 -> a1 | b1\nb2 -> a1 | b1\n"
NIELSEN = "2 2\na1 -> a1 a2 | 1\na2 -> a2 | 1\nb1 -> 1 | b1 b2\nb2 -> 1 | b2\n"
FACTOR_SWAP = "2 2\na1 -> 1 | b1\na2 -> 1 | b2\nb1 -> a1 | 1\nb2 -> a2 | 1\n"


@pytest.fixture
def endo(tmp_path):
    def write(text: str, name: str = "e.txt") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def call_json(argv):
    code, text = call(argv + ["--format", "json"])
    report = json.loads(text)
    jsonschema.validate(report, REPORT_SCHEMA)
    return code, report


def test_brp_identity(endo):
    code, report = call_json(["brp", "--endo", endo(IDENTITY), "--from", "a1|b1", "--to", "a1|b1"])
    assert code == 0
    assert report["verdict"]["verdict"] == "found" and report["verdict"]["witness"] == 0


def test_brcp_type_I_non_power_target(endo):
    code, report = call_json(["brcp", "--endo", endo(TYPE_I), "--from", "a1|b1", "--to", "a2|b1"])
    assert code == 0
    assert report["verdict"]["verdict"] == "refuted"


def test_2brcp_tiny_budget_is_undecided(endo):
    argv = ["2brcp", "--endo", endo(NIELSEN), "--from", "a1|b1", "--to", "a1 a2 a2 a2 a2 a2 a2|b1 b2 b2 b2 b2 b2 b2", "--max-steps", "1"]
    code, report = call_json(argv)
    assert code == 2
    assert report["verdict"]["verdict"] == "bound_exceeded"
    code, text = call(argv)
    assert code == 2 and text.startswith("verdict: Undecided")


def test_bad_token_reports_position(endo, capsys):
    code, _ = call(["brp", "--endo", endo(IDENTITY), "--from", "a1 x|b1", "--to", "a1|b1"])
    assert code == 1
    err = capsys.readouterr().err
    lines = err.splitlines()
    caret = next(line for line in lines if line.strip() == "^")
    source = lines[lines.index(caret) - 1]
    assert source[caret.index("^")] == "x"


def test_input_errors_exit_one(endo, tmp_path):
    assert call(["brp", "--endo", str(tmp_path / "missing.txt"), "--from", "a1|b1", "--to", "a1|b1"])[0] == 1
    assert call(["brp", "--endo", endo("2 2\na1 -> a3 | 1\n"), "--from", "a1|b1", "--to", "a1|b1"])[0] == 1
    assert call(["no-such-command"])[0] == 1
    # two-sided problems need an injective endomorphism
    assert call(["2brcp", "--endo", endo(TYPE_I), "--from", "a1|b1", "--to", "a1|b1"])[0] == 1


def test_randomized_json_needs_a_seed(endo):
    path = endo(NIELSEN)
    assert call(["cm-defect", "--endo", path, "--samples", "20", "--format", "json"])[0] == 1
    code, report = call_json(["cm-defect", "--endo", path, "--samples", "20", "--seed", "3"])
    assert code == 0
    again = call_json(["cm-defect", "--endo", path, "--samples", "20", "--seed", "3"])[1]
    assert again["details"] == report["details"]


TEXT_PREFIX = {"found": "Found", "refuted": "Refuted", "bound_exceeded": "Undecided"}


@pytest.mark.parametrize(
    "argv",
    [
        ["classify"],
        ["brp", "--from", "a1 a2|b1", "--to", "a1 a2 a2|b1 b2"],
        ["brcp", "--from", "a1|b1", "--to", "a2 a1 A2|b1 b2 b2"],
        ["2brcp", "--from", "a1|b1", "--to", "a1 a2|b1 b2"],
        ["tcp", "--from", "a1 a2|b1", "--to", "a1 a2|b1"],
        ["hnn-normalize", "T a1 t a2"],
        ["hnn-eq", "T a1 t", "a1 a2"],
        ["uc-check"],
        ["cm-defect", "--samples", "30", "--seed", "1"],
        ["boundary-orbit", "--point", "a1:(a2)|:(b1)", "--budget", "10"],
    ],
)
def test_text_and_json_agree(endo, argv):
    argv = [argv[0], "--endo", endo(NIELSEN)] + argv[1:]
    code_json, report = call_json(argv)
    code_text, text = call(argv)
    assert code_json == code_text
    assert text.startswith("verdict: " + TEXT_PREFIX[report["verdict"]["verdict"]])
    assert report["command"] == argv[0]


def test_boundary_orbit_swap_is_periodic(endo):
    code, report = call_json(["boundary-orbit", "--endo", endo(FACTOR_SWAP), "--point", ":(a1)|:(b2)"])
    assert code == 0 and report["verdict"]["witness"] == 2
