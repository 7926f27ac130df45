import io as stdio
import json
import os
import subprocess
import sys

import pytest

from conftest import DATA
from instances import v
from tropopt import MAX_PLUS, MIN_PLUS, Matrix, membership, solve, spectral_radius
from tropopt import io
from tropopt.cli import main
from tropopt.errors import DimensionError, ParseError
from tropopt.oracle import GridSpec, verify_solution_set


def path(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- documents ------------------------------------------------------------


def test_matrix_round_trip():
    doc = {"rows": 2, "cols": 2, "data": [[1, "zero"], ["3/6", -2]]}
    M = io.parse_matrix(MAX_PLUS, doc)
    assert io.matrix_doc(M) == {"rows": 2, "cols": 2, "data": [[1, "zero"], ["1/2", -2]]}
    assert io.parse_matrix(MAX_PLUS, io.matrix_doc(M)) == M


def test_matrix_errors():
    with pytest.raises(DimensionError):
        io.parse_matrix(MAX_PLUS, {"rows": 3, "cols": 1, "data": [[1], [2]]})
    with pytest.raises(DimensionError):
        io.parse_matrix(MAX_PLUS, [[1, 2], [3]])
    with pytest.raises(ParseError):
        io.parse_matrix(MAX_PLUS, {"data": [[1, "x"]]})
    with pytest.raises(ParseError):
        io.parse_vector(MAX_PLUS, [[1]])
    with pytest.raises(ParseError):
        io.load_json("{")


def test_problem_round_trip():
    with open(path("constrained_problem.json")) as fh:
        inst = io.parse_problem(json.load(fh))
    again = io.parse_problem(io.problem_doc(inst))
    assert again == inst


def test_outcome_round_trip_reverifies():
    with open(path("window_problem.json")) as fh:
        inst = io.parse_problem(json.load(fh))
    out = solve(inst)
    doc = json.loads(io.dump_json(io.outcome_doc(out)))
    back = io.parse_outcome(doc)
    assert back.optimum == out.optimum and back.solutions == out.solutions
    grid = GridSpec(-2, 4, "1/2")
    a = verify_solution_set(inst, out, grid)
    b = verify_solution_set(inst, back, grid)
    assert a.passed and (a.checks, a.failures) == (b.checks, b.failures)
    for x in (v([1, 0, 0]), v([1, 0, 2]), v([1, 0, 3])):
        assert membership(inst, out, x) == membership(inst, back, x)


def test_project_times_by_position():
    doc = {"activities": ["x", "y"], "start_finish": [{"from": 0, "to": "y", "lag": 1}],
           "late_start": {"0": 1, "y": 2}, "early_finish": [3, None]}
    p = io.parse_project(doc)
    assert p.late_start == {0: 1, 1: 2} and p.early_finish == {0: 3}
    assert p.A.data[1][0] == 1


# --- command line ---------------------------------------------------------


def test_spectral(capsys):
    code, out, _ = run(capsys, "spectral", path("window_matrix.json"))
    assert code == 0 and out.splitlines()[0] == "lambda = 3"
    assert "tr^(1/3) = 8/3" in out
    code, out, _ = run(capsys, "spectral", path("constrained_problem.json"))
    assert out.splitlines()[0] == "lambda = 4"


def test_spectral_identity(capsys, tmp_path):
    f = tmp_path / "eye.json"
    f.write_text(json.dumps({"rows": 2, "cols": 2, "data": [[0, "zero"], ["zero", 0]]}))
    code, out, _ = run(capsys, "spectral", str(f))
    assert out.splitlines()[0] == "lambda = 0"


def test_spectral_json_and_override(capsys):
    code, out, _ = run(capsys, "spectral", path("window_matrix.json"), "--format", "json",
                       "--semifield", "min-plus")
    doc = json.loads(out)
    # min-plus radius of A is minus the max-plus radius of -A
    neg = Matrix(MAX_PLUS, [[None if x == "zero" else -x for x in row]
                            for row in [[2, 4, "zero"], [2, 2, 1], [0, -1, 1]]])
    expected = MIN_PLUS.render(-spectral_radius(neg).value)
    assert doc["semifield"] == "min-plus" and doc["lambda"] == expected


def test_star(capsys):
    code, out, _ = run(capsys, "star", path("constrained_problem.json"))
    doc = json.loads(out)
    assert doc["star"]["data"][0][0] == 8


@pytest.mark.parametrize("name, optimum", [
    ("constrained_problem.json", 4), ("window_rayleigh.json", 3), ("window_problem.json", 3)])
def test_solve(capsys, name, optimum):
    code, out, _ = run(capsys, "solve", path(name))
    doc = json.loads(out)
    assert code == 0 and doc["optimum"] == optimum
    if name == "constrained_problem.json":
        assert doc["lower"] == [2, 2, 3] and doc["canonical"] == [4, 5, 3] and doc["upper"] is None


def test_solve_infeasible(capsys):
    code, out, _ = run(capsys, "solve", path("infeasible_constraints.json"))
    assert code == 4
    assert json.loads(out)["diagnostics"]["error"] == "InfeasibleConstraints"


def test_schedule_window(capsys):
    code, out, _ = run(capsys, "schedule", path("window_project.json"))
    assert code == 0
    assert "x1 (a1)   1\n" in out and "x2 (a2)   0\n" in out and "x3 (a3)   [0, 2]" in out
    assert "max flow time  = 3" in out


def test_schedule_constrained_json(capsys):
    code, out, _ = run(capsys, "schedule", path("constrained_project.json"), "--format", "json")
    doc = json.loads(out)
    assert doc["initiation"] == [4, 5, 3] and doc["max_flow_time"] == 4
    assert doc["intervals"][0]["text"] == ">= 4"


@pytest.mark.parametrize("argv, code", [
    (["schedule", "empty_project.json"], 2),
    (["spectral", "bad_dimension.json"], 3),
    (["spectral", "bad_scalar.json"], 2),
    (["spectral", "missing.json"], 2),
])
def test_exit_codes(capsys, argv, code):
    argv[1] = path(argv[1])
    assert run(capsys, *argv)[0] == code


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", path("window_problem.json"), "--grid", "-2:4:0.5")
    assert code == 0 and out.strip().endswith("result: pass")
    code, out, _ = run(capsys, "verify", path("constrained_problem.json"), "--grid", "0:8:0.5")
    assert code == 0
    code, out, _ = run(capsys, "verify", path("corrupted_optimum.json"), "--grid", "0:8:0.5")
    assert code == 5 and "counterexample" in out


def test_verify_default_grid(capsys):
    assert run(capsys, "verify", path("window_problem.json"))[0] == 0


def test_output_file_and_determinism(capsys, tmp_path):
    outs = []
    for k in range(2):
        target = tmp_path / f"out{k}.json"
        assert run(capsys, "solve", path("window_problem.json"), "-o", str(target))[0] == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_stdin(capsys, monkeypatch):
    with open(path("window_matrix.json")) as fh:
        monkeypatch.setattr(sys, "stdin", stdio.StringIO(fh.read()))
    assert run(capsys, "spectral")[1].startswith("lambda = 3")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tropopt", "spectral", path("window_matrix.json")],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("lambda = 3")
