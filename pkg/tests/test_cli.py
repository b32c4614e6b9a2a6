import numpy as np
import pytest

from oacone import CountingVector, DesignSpace, constraint_matrix, hilbert_basis, write_basis
from oacone.cli import run
from oacone.files import write_counting_vector, write_run_list

D3 = DesignSpace((2, 2, 2))


def half_fraction():
    return CountingVector.from_points(D3, [p for p in D3.points() if sum(p) % 2])


@pytest.fixture()
def half_runs(tmp_path):
    path = tmp_path / "half.runs"
    write_run_list(half_fraction(), path)
    return str(path)


@pytest.fixture()
def even_runs(tmp_path):
    path = tmp_path / "even.runs"
    y = CountingVector.from_points(D3, [p for p in D3.points() if sum(p) % 2 == 0])
    write_run_list(y, path)
    return str(path)


@pytest.fixture(scope="module")
def basis_d3_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("basis") / "basis_d3.txt"
    write_basis(hilbert_basis(constraint_matrix(D3, 2)), path)
    return str(path)


def test_gwlp_run_list(half_runs, capsys):
    assert run(["gwlp", "--design", "2 2 2", half_runs]) == 0
    out = capsys.readouterr().out
    assert "A = 1, 0, 0, 1" in out
    assert "strength = 2" in out


def test_gwlp_counts_format(tmp_path, capsys):
    path = tmp_path / "y.txt"
    write_counting_vector(half_fraction(), path)
    assert run(["gwlp", "--design", "2 2 2", "--format", "counts", str(path)]) == 0
    assert "A = 1, 0, 0, 1" in capsys.readouterr().out


def test_verify_pass_and_fail(half_runs, capsys):
    assert run(["verify", "--design", "2 2 2", "--strength", "2", half_runs]) == 0
    out = capsys.readouterr().out
    assert "checks agree: yes" in out
    assert run(["verify", "--design", "2 2 2", "--strength", "3", half_runs]) == 5


def test_cone_export(tmp_path, capsys):
    out_path = tmp_path / "cone.txt"
    assert run(["cone", "--design", "2 2 2", "--strength", "2",
                "--out", str(out_path)]) == 0
    header = out_path.read_text().splitlines()[0]
    assert header == "9 8"


def test_hilbert_compute_write_reimport(tmp_path, capsys):
    out_path = tmp_path / "basis.txt"
    assert run(["hilbert", "--design", "2 2 2", "--strength", "2",
                "--out", str(out_path), "--verify"]) == 0
    out = capsys.readouterr().out
    assert "elements = 2" in out
    assert "size 4: 2" in out
    assert "minimality: ok" in out
    assert run(["hilbert", "--design", "2 2 2", "--strength", "2",
                "--import", str(out_path), "--verify"]) == 0
    assert "elements = 2" in capsys.readouterr().out


def test_hilbert_budget_exceeded(capsys):
    code = run(["hilbert", "--design", "2 2 2 2", "--strength", "2", "--budget", "5"])
    assert code == 6
    assert "budget" in capsys.readouterr().err


def test_union_formula_and_direct(half_runs, even_runs, tmp_path, capsys):
    out_path = tmp_path / "union.counts"
    assert run(["union", "--design", "2 2 2", "--out", str(out_path),
                half_runs, even_runs]) == 0
    out = capsys.readouterr().out
    assert "A = 1, 0, 0, 0" in out
    from oacone.files import read_counting_vector
    assert read_counting_vector(out_path, D3) == CountingVector.full_factorial(D3)
    assert run(["union", "--design", "2 2 2", "--path", "direct",
                half_runs, even_runs]) == 0
    assert "A = 1, 0, 0, 0" in capsys.readouterr().out


def test_classify_table_and_csv(basis_d3_file, capsys):
    args = ["classify", "--design", "2 2 2", "--strength", "2", "--n", "8",
            "--basis", basis_d3_file]
    assert run(args) == 0
    table = capsys.readouterr().out
    assert "(4+4)-run" in table
    assert "GMA optimum: 1 designs with A = 1, 0, 0, 0" in table
    assert run(args + ["--csv"]) == 0
    csv = capsys.readouterr().out
    assert csv.splitlines()[0] == "type,0,1,total"
    assert "(4+4)-run,1,2,3" in csv


def test_classify_best_dir(basis_d3_file, tmp_path, capsys):
    best_dir = tmp_path / "best"
    assert run(["classify", "--design", "2 2 2", "--strength", "2", "--n", "8",
                "--basis", basis_d3_file, "--best", str(best_dir)]) == 0
    files = sorted(best_dir.iterdir())
    assert len(files) == 1
    from oacone.files import read_run_list
    assert read_run_list(files[0], D3) == CountingVector.full_factorial(D3)


def test_classify_deterministic(basis_d3_file, capsys):
    args = ["classify", "--design", "2 2 2", "--strength", "2", "--n", "12",
            "--basis", basis_d3_file, "--csv", "--workers", "2"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first


def test_bound(capsys):
    assert run(["bound", "--design", "2 2 2 2 2", "--strength", "2", "--n", "20"]) == 0
    assert "2/5 (0.4)" in capsys.readouterr().out


def test_error_exit_codes(tmp_path, capsys):
    assert run(["gwlp", "--design", "2 x", str(tmp_path / "nope")]) == 3
    assert run(["gwlp", "--design", "2 2 2", str(tmp_path / "nope")]) == 4
    assert run(["nonsense"]) == 2
    empty = tmp_path / "empty.counts"
    empty.write_text("0\n" * 8)
    assert run(["gwlp", "--design", "2 2 2", str(empty)]) == 7
    capsys.readouterr()


def test_help_texts(capsys):
    for sub in ["gwlp", "verify", "cone", "hilbert", "union", "classify", "bound"]:
        assert run([sub, "--help"]) == 0
        assert "usage" in capsys.readouterr().out
