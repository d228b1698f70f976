import numpy as np
import pytest

from prunedseg.errors import InputError
from prunedseg.fileio import read_signal, write_json, write_signal
from prunedseg.simulate import SignalSpec, simulate


def test_read_worked_example(tmp_path):
    p = tmp_path / "y.txt"
    p.write_text("0\n0.5\n0.4\n-0.5\n")
    assert read_signal(p).tolist() == [0, 0.5, 0.4, -0.5]


def test_bad_line_is_named(tmp_path):
    p = tmp_path / "y.txt"
    p.write_text("1\n2\nabc\n4\n")
    with pytest.raises(InputError, match="line 3"):
        read_signal(p)


@pytest.mark.parametrize("token", ["nan", "inf", "-Infinity"])
def test_nonfinite_rejected(tmp_path, token):
    p = tmp_path / "y.txt"
    p.write_text(f"1\n{token}\n")
    with pytest.raises(InputError, match="line 2"):
        read_signal(p)


def test_empty_and_missing(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("\n# nothing\n")
    with pytest.raises(InputError, match="no observations"):
        read_signal(p)
    with pytest.raises(InputError, match="cannot open"):
        read_signal(tmp_path / "absent.txt")
    with pytest.raises(InputError):
        read_signal(p, format="xlsx")


def test_csv_column_million_rows(tmp_path):
    y = simulate(SignalSpec("sine", 10**6, 2.0, 10.0, 0.0, "gaussian", 4))
    idx = np.arange(y.size)
    p = tmp_path / "big.csv"
    with open(p, "w") as fh:
        fh.write("pos,log2ratio\n")
        fh.writelines(f"{i},{v!r}\n" for i, v in zip(idx.tolist(), y.tolist()))
    by_name = read_signal(p, "csv", "log2ratio")
    assert by_name.size == 10**6
    assert np.array_equal(by_name, y)
    assert np.array_equal(read_signal(p, "csv", 1), y)


def test_csv_errors(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("a,b\n1,2\n3\n")
    with pytest.raises(InputError, match="line 3"):
        read_signal(p, "csv", 1)
    with pytest.raises(InputError, match="no column"):
        read_signal(p, "csv", "c")


def test_writer_roundtrip_is_exact(tmp_path):
    y = np.random.default_rng(0).normal(size=1000) * 1e-7
    p = tmp_path / "y.txt"
    write_signal(p, y)
    assert np.array_equal(read_signal(p), y)
    write_json(tmp_path / "x.json", {"a": 1})
    assert (tmp_path / "x.json").read_text().endswith("\n")
