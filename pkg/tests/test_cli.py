import json
import subprocess
import sys

import numpy as np
import pytest

from prunedseg.api import check_change_points, resum_costs, segment
from prunedseg.cli import main
from prunedseg.errors import ConfigError
from prunedseg.fileio import read_signal


@pytest.fixture
def example_file(tmp_path):
    p = tmp_path / "y.txt"
    p.write_text("0\n0.5\n0.4\n-0.5\n")
    return p


@pytest.fixture
def noisy_file(tmp_path):
    rng = np.random.default_rng(17)
    y = rng.normal(size=400) + np.repeat([0.0, 2.0, -1.0, 1.5], 100)
    p = tmp_path / "noisy.txt"
    p.write_text("".join(f"{v!r}\n" for v in y.tolist()))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_segment_worked_example(capsys, example_file):
    code, out = run(capsys, "segment", "--input", example_file, "--k-max", 2,
                    "--algorithm", "pruned")
    assert code == 0
    doc = json.loads(out)
    k2 = doc["segmentations"][1]
    assert k2["change_points"] == [3]
    assert k2["cost"] == pytest.approx(0.14, abs=1e-15)
    assert k2["segment_means"] == pytest.approx([0.3, -0.5], abs=1e-15)
    assert doc["n"] == 4 and doc["loss"] == "quadratic" and doc["algorithm"] == "pruned"


def test_k_max_one(capsys, example_file):
    _, out = run(capsys, "segment", "--input", example_file, "--k-max", 1)
    (only,) = json.loads(out)["segmentations"]
    assert only["change_points"] == []
    assert only["cost"] == pytest.approx(0.62, abs=1e-14)


@pytest.mark.parametrize("loss", ["quadratic", "poisson"])
def test_classical_and_pruned_agree(capsys, tmp_path, loss):
    rng = np.random.default_rng(5)
    y = rng.poisson(np.repeat([1.0, 4.0, 2.0], 60)).astype(float)
    p = tmp_path / "c.txt"
    p.write_text("".join(f"{v!r}\n" for v in y.tolist()))
    docs = {}
    for alg in ("classical", "pruned"):
        code, out = run(capsys, "segment", "--input", p, "--k-max", 5, "--loss", loss,
                        "--algorithm", alg)
        assert code == 0
        docs[alg] = json.loads(out)
    a, b = docs["classical"]["segmentations"], docs["pruned"]["segmentations"]
    assert [s["change_points"] for s in a] == [s["change_points"] for s in b]
    for sa, sb in zip(a, b):
        assert abs(sa["cost"] - sb["cost"]) <= 1e-8 * max(1.0, abs(sa["cost"]))


@pytest.mark.parametrize("alg", ["pruned", "classical", "grid"])
def test_output_resums(capsys, noisy_file, tmp_path, alg):
    out_path = tmp_path / "out.json"
    code, _ = run(capsys, "segment", "--input", noisy_file, "--k-max", 6, "--algorithm", alg,
                  "--output", out_path)
    assert code == 0
    doc = json.loads(out_path.read_text())
    y = read_signal(noisy_file)
    for seg, again in zip(doc["segmentations"], resum_costs(y, doc)):
        assert abs(again - seg["cost"]) <= 1e-9 * max(1.0, abs(seg["cost"]))
        cps = seg["change_points"]
        assert len(cps) == seg["k"] - 1
        check_change_points(cps, y.size)
        if alg == "grid":
            assert seg["heuristic_cost"] >= seg["cost"] - 1e-9
        else:
            assert seg["heuristic_cost"] is None


def test_deterministic_output(capsys, noisy_file):
    outs = []
    for _ in range(2):
        _, out = run(capsys, "segment", "--input", noisy_file, "--k-max", 4)
        doc = json.loads(out)
        doc.pop("runtime_ms")
        outs.append(doc)
    assert outs[0] == outs[1]


def test_trace_file(capsys, example_file, tmp_path):
    t = tmp_path / "trace.csv"
    code, _ = run(capsys, "segment", "--input", example_file, "--k-max", 2, "--trace", t)
    assert code == 0
    assert t.read_text().splitlines()[0] == "k,t,candidates,intervals,pruned"


@pytest.mark.parametrize("argv", [
    ["segment", "--input", "{f}", "--k-max", "2", "--grid-size", "8"],
    ["segment", "--input", "{f}", "--k-max", "2", "--algorithm", "classical", "--trace", "x"],
    ["segment", "--input", "{f}", "--k-max", "2", "--algorithm", "magic"],
    ["segment", "--input", "{f}"],
    ["frobnicate"],
])
def test_config_errors_exit_2(capsys, example_file, argv):
    code, out = run(capsys, *[a.replace("{f}", str(example_file)) for a in argv])
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "config_error" and err["message"]


@pytest.mark.parametrize("content,flags,kind", [
    ("1\n-2\n", ["--loss", "poisson"], "input_error"),
    ("1\nabc\n", [], "input_error"),
    ("1\n2\n", ["--k-max", "3"], "input_error"),
])
def test_input_errors_exit_1(capsys, tmp_path, content, flags, kind):
    p = tmp_path / "bad.txt"
    p.write_text(content)
    argv = ["segment", "--input", p, *flags]
    if "--k-max" not in flags:
        argv += ["--k-max", 1]
    code, out = run(capsys, *argv)
    assert code == 1
    assert json.loads(out)["error"]["type"] == kind


def test_classical_cap_env(capsys, monkeypatch, noisy_file):
    monkeypatch.setenv("PRUNEDSEG_CLASSICAL_CAP", "100")
    code, out = run(capsys, "segment", "--input", noisy_file, "--k-max", 2,
                    "--algorithm", "classical")
    assert code == 2 and "cap" in json.loads(out)["error"]["message"]
    monkeypatch.setenv("PRUNEDSEG_CLASSICAL_CAP", "1000")
    code, _ = run(capsys, "segment", "--input", noisy_file, "--k-max", 2,
                  "--algorithm", "classical")
    assert code == 0
    with pytest.raises(ConfigError):
        segment(np.zeros(10), 1, algorithm="classical", cap=5)


def test_simulate_writes_sidecar(capsys, tmp_path):
    out = tmp_path / "sig.txt"
    code, _ = run(capsys, "simulate", "--shape", "rectangular", "--n", 200, "--amplitude", 2,
                  "--frequency", 4, "--noise", "uniform", "--seed", 9, "--output", out)
    assert code == 0
    y = read_signal(out)
    assert y.size == 200
    spec = json.loads((tmp_path / "sig.txt.json").read_text())
    assert spec == {"shape": "rectangular", "n": 200, "amplitude": 2.0, "frequency": 4.0,
                    "level": 0.0, "noise": "uniform", "seed": 9}
    run(capsys, "simulate", "--shape", "rectangular", "--n", 200, "--amplitude", 2,
        "--frequency", 4, "--noise", "uniform", "--seed", 9, "--output", tmp_path / "again.txt")
    assert (tmp_path / "again.txt").read_bytes() == out.read_bytes()


def test_simulate_rejects_bad_n(capsys, tmp_path):
    code, out = run(capsys, "simulate", "--n", 0, "--output", tmp_path / "x.txt")
    assert code == 1 and json.loads(out)["error"]["type"] == "input_error"


def test_module_entry_point(example_file):
    proc = subprocess.run([sys.executable, "-m", "prunedseg", "segment", "--input",
                           str(example_file), "--k-max", "2"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["segmentations"][1]["change_points"] == [3]
