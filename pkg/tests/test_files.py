import pytest

from oacone import CountingVector, DesignSpace
from oacone.errors import FileFormatError
from oacone.files import (
    load_fraction,
    read_counting_vector,
    read_run_list,
    write_counting_vector,
    write_run_list,
)

D3 = DesignSpace((2, 2, 2))


def half_fraction():
    return CountingVector.from_points(D3, [p for p in D3.points() if sum(p) % 2])


def test_counting_vector_roundtrip(tmp_path):
    path = tmp_path / "y.txt"
    write_counting_vector(half_fraction(), path)
    assert read_counting_vector(path, D3) == half_fraction()


def test_run_list_roundtrip(tmp_path):
    path = tmp_path / "runs.txt"
    y = CountingVector.from_points(D3, [(0, 0, 1), (0, 0, 1), (1, 1, 1)])
    write_run_list(y, path)
    assert read_run_list(path, D3) == y
    assert len(path.read_text().splitlines()) == 3


def test_load_fraction_autodetect(tmp_path):
    counts = tmp_path / "counts.txt"
    write_counting_vector(half_fraction(), counts)
    runs = tmp_path / "runs.txt"
    write_run_list(half_fraction(), runs)
    assert load_fraction(counts, D3) == half_fraction()
    assert load_fraction(runs, D3) == half_fraction()


def test_counting_vector_errors(tmp_path):
    short = tmp_path / "short.txt"
    short.write_text("1\n0\n")
    with pytest.raises(FileFormatError):
        read_counting_vector(short, D3)
    negative = tmp_path / "neg.txt"
    negative.write_text("\n".join(["1"] * 7 + ["-1"]) + "\n")
    with pytest.raises(FileFormatError):
        read_counting_vector(negative, D3)
    garbled = tmp_path / "garbled.txt"
    garbled.write_text("\n".join(["1"] * 7 + ["x"]) + "\n")
    with pytest.raises(FileFormatError):
        read_counting_vector(garbled, D3)


def test_run_list_errors(tmp_path):
    wrong_width = tmp_path / "w.txt"
    wrong_width.write_text("0 1\n")
    with pytest.raises(FileFormatError):
        read_run_list(wrong_width, D3)
    bad_level = tmp_path / "lvl.txt"
    bad_level.write_text("0 0 2\n")
    with pytest.raises(FileFormatError):
        read_run_list(bad_level, D3)


def test_missing_file():
    with pytest.raises(FileFormatError):
        load_fraction("/nonexistent/path.txt", D3)
