import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from convwalk.cli import run


def invoke(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


Z4 = ["--group", "cyclic:4", "--measure", "atoms:1=0.5,3=0.5"]


def test_analyze_z4(capsys):
    code, out, _ = invoke(["analyze", *Z4], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["verdicts"] == {"uniformly_ergodic": True, "uniformly_completely_mixing": False}
    assert d["input"]["spec"] == {"group": "cyclic:4", "measure": "atoms:1=0.5,3=0.5"}
    assert all(c["passed"] for c in d["cross_checks"])


def test_analyze_pretty_and_csv(capsys):
    code, out, _ = invoke(["analyze", *Z4, "--format", "pretty"], capsys)
    assert code == 0 and "uniformly ergodic     True" in out and "katznelson_tzafriri" in out
    code, out, _ = invoke(["analyze", *Z4, "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["theorem", "passed", "detail"] and len(rows) == 14


def test_analyze_measure_file(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"group": {"family": "cyclic", "n": 4}, "weights": [0, 0.5, 0, 0.5]}))
    code, out, _ = invoke(["analyze", "--group", "cyclic:4", "--measure-file", str(f)], capsys)
    assert code == 0 and json.loads(out)["adapted"]


def test_sweep_decays_like_half_to_the_n(capsys):
    code, out, _ = invoke(["sweep", "--group", "cyclic:3", "--measure", "atoms:0=0.5,1=0.5",
                           "--n-max", "60"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 60
    p = np.array([float(r["pow_norm"]) for r in rows])
    n = np.arange(1, 61)
    ratio = p / 0.5**n
    assert ratio.min() > 0.1 and ratio.max() < 10
    assert abs(p[-1] ** (1 / 60) - 0.5) < 0.05


def test_fourier_command(capsys):
    code, out, _ = invoke(["fourier", "--group", "dihedral:3", "--measure", "uniform:1,3"], capsys)
    d = json.loads(out)
    assert code == 0 and d["peter_weyl"]["passed"] and d["adapted_check"]["passed"]
    assert sorted(b["dim"] for b in d["blocks"]) == [1, 1, 2]


def test_fourier_reps_file(tmp_path, capsys):
    from convwalk.fourier import builtin_irreps
    from convwalk.group import dihedral
    reps = [r.to_dict() for r in builtin_irreps(dihedral(3))]
    table = {"family": "cayley", "table": dihedral(3).mul.tolist()}
    for r in reps:
        r["group"] = table
    f = tmp_path / "reps.json"
    f.write_text(json.dumps({"representations": reps}))
    spec = json.dumps(table)
    code, _, err = invoke(["fourier", "--group", spec, "--measure", "uniform:1,3"], capsys)
    assert code == 2 and "representation file" in err
    code, out, _ = invoke(["fourier", "--group", spec, "--measure", "uniform:1,3",
                           "--reps-file", str(f)], capsys)
    assert code == 0 and json.loads(out)["peter_weyl"]["passed"]


def test_arc_demo(capsys):
    code, out, _ = invoke(["arc-demo", "--n", "16"], capsys)
    d = json.loads(out)
    assert code == 0 and d["zero_norm"] == 1 and d["zero_spectral_radius"] < 1
    assert invoke(["arc-demo", "--n", "16", "--fraction", "0.5"], capsys)[0] == 2


def test_z_witness(capsys):
    code, out, _ = invoke(["z-witness", "--measure", "atoms:0/0=0.25,1/0=0.25,0/1=0.5",
                           "--shift", "3/3", "--n-max", "5"], capsys)
    d = json.loads(out)
    assert code == 0 and d["all_exactly_one"] and d["rows"][0]["shift"] == [3, 3]
    assert invoke(["z-witness", "--measure", "atoms:0=0.5,1=0.5", "--shift", "1"], capsys)[0] == 2


@pytest.mark.parametrize("argv", [
    ["analyze", "--group", "cyclic:4", "--measure", "atoms:1=0.5,3=-0.5"],
    ["analyze", "--group", "cyclic:4", "--measure", "atoms:9=1"],
    ["analyze", "--group", "klein:4", "--measure", "haar"],
    ["analyze", "--group", "cyclic:4", "--measure-file", "/nonexistent.json"],
    ["analyze", "--group", "cyclic:4", "--measure", "haar", "--eigen-tol", "-1"],
    ["analyze", "--group", "cyclic:4", "--measure", "haar", "--n-max", "0"],
    ["analyze", "--group", "cyclic:4"],
    ["fourier", "--group", "symmetric:5", "--measure", "haar"],
    ["verify", "--corpus", "/nonexistent.json"],
    ["bogus"],
])
def test_input_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        sys.exit(run(argv))
    assert info.value.code == 2


def test_degenerate_exit_4(capsys):
    code, _, err = invoke(["analyze", "--group", "cyclic:2", "--measure",
                           "atoms:0=0.99999999,1=0.00000001"], capsys)
    assert code == 4 and "degeneracy" in err


def test_theorem_violation_exit_3(monkeypatch, tmp_path, capsys):
    import importlib
    mod = importlib.import_module("convwalk.classify")
    monkeypatch.setattr(mod, "covering_index", lambda mu, cap=None: None)
    out = tmp_path / "r.json"
    code, _, err = invoke(["analyze", *Z4, "--out", str(out)], capsys)
    assert code == 3 and "ue_iff_covering" in err
    assert json.loads(out.read_text())["covering_n"] is None


def small_corpus(tmp_path, count=4):
    f = tmp_path / "corpus.json"
    f.write_text(json.dumps({"entries": [
        {"group": {"family": "dihedral", "n": 4}, "generator": {"kind": "random", "count": count}},
        {"group": {"family": "cyclic", "n": 6}, "generator": {"kind": "diracs"}},
    ]}))
    return f


def test_verify_small_corpus(tmp_path, capsys):
    code, out, _ = invoke(["verify", "--corpus", str(small_corpus(tmp_path)), "--seed", "7"], capsys)
    d = json.loads(out)
    assert code == 0 and d["instances"] == 10 and d["passes"] == 10 and d["seed"] == 7


def test_verify_degenerate_exit_4(tmp_path, capsys):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"entries": [
        {"group": {"family": "cyclic", "n": 12}, "generator": {"kind": "random", "count": 10}}]}))
    code, out, _ = invoke(["verify", "--corpus", str(f), "--gap-tol", "0.5"], capsys)
    d = json.loads(out)
    assert code == 4 and d["degenerate"] and not d["failures"]
    assert d["passes"] + len(d["degenerate"]) == 10


def test_verify_default_seed_42(tmp_path, capsys):
    out = tmp_path / "summary.json"
    code, _, _ = invoke(["verify", "--corpus", "default", "--seed", "42", "--out", str(out)], capsys)
    d = json.loads(out.read_text())
    assert code == 0 and d["passes"] == d["instances"] and d["failures"] == [] and d["seed"] == 42


@pytest.mark.parametrize("argv", [
    ["analyze", *Z4],
    ["sweep", "--group", "dihedral:5", "--measure", "atoms:1=0.3,5=0.7", "--n-max", "30"],
    ["fourier", "--group", "symmetric:4", "--measure", "uniform:1,2,3"],
])
def test_outputs_are_byte_identical(argv, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run([*argv, "--out", str(a)]) == 0
    assert run([*argv, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_byte_identical(tmp_path):
    corpus = str(small_corpus(tmp_path, 6))
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["verify", "--corpus", corpus, "--seed", "3", "--out", str(a)]) == 0
    assert run(["verify", "--corpus", corpus, "--seed", "3", "--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_out_is_atomic(tmp_path, monkeypatch):
    target = tmp_path / "r.json"
    target.write_text("previous")
    import convwalk.cli as cli

    def boom(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "replace", boom)
    assert run(["analyze", *Z4, "--out", str(target)]) == 2
    assert target.read_text() == "previous"
    assert [p.name for p in tmp_path.iterdir()] == ["r.json"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "convwalk", "arc-demo", "--n", "8",
                          "--format", "pretty"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "Z_8" in res.stdout
