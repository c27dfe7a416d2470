import io
import json
import subprocess
import sys

import pytest

from zerosum.cli import main


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_then_verify_wide_range(capsys, monkeypatch):
    code, out, _ = run(capsys, ["gen", "--kind", "wide-range", "--n", "7", "--a", "3"])
    assert code == 0
    w = json.loads(out)
    assert w["n"] == 7 and w["r"] == 2 and sum(w["weights"]) == 0
    code, out, _ = run(capsys, ["verify", "--m", "4"], stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    assert json.loads(out)["kind"] == "NONE_EXISTS"


def test_verify_finds_witness(capsys, monkeypatch):
    _, out, _ = run(capsys, ["gen", "--kind", "clique-neg", "--n", "21", "--a", "15"])
    code, out, _ = run(capsys, ["verify", "--m", "4"], stdin=out, monkeypatch=monkeypatch)
    assert json.loads(out) == {"kind": "ZERO_SUM_WITNESS", "m": 4, "witness": [0, 1, 2, 15],
                               "context": "first zero-sum 4-subset in lexicographic order"}


@pytest.mark.parametrize("argv", [
    ["gen", "--kind", "clique-neg", "--n", "21", "--a", "15"],
    ["gen", "--kind", "bipartition", "--n", "9", "--a", "6"],
    ["gen", "--kind", "extremal-k4", "--n", "7"],
    ["gen", "--kind", "extremal-k4", "--n", "8", "--j", "empty"],
    ["gen", "--kind", "wide-range", "--n", "36", "--a", "15"],
])
def test_gen_round_trip_byte_identical(capsys, tmp_path, argv):
    code, out, _ = run(capsys, argv)
    assert code == 0
    path = tmp_path / "w.json"
    path.write_text(out)
    from zerosum.weightings import SignedWeighting
    assert SignedWeighting.from_json(path.read_text()).to_json() + "\n" == out
    code, cert, _ = run(capsys, ["verify", "--m", "3", "--input", str(path)])
    assert code == 0 and json.loads(cert)["m"] == 3


def test_pell(capsys):
    code, out, _ = run(capsys, ["pell", "--family", "bal-clique", "--count", "3"])
    assert code == 0
    assert [(s["x"], s["y"]) for s in json.loads(out)] == [(1, 1), (3, 7), (15, 41)]
    _, out, _ = run(capsys, ["pell", "--family", "neg-pell", "--count", "4"])
    assert [(s["x"], s["y"]) for s in json.loads(out)] == [(1, 1), (5, 7), (29, 41), (169, 239)]


def test_threshold(capsys):
    code, out, err = run(capsys, ["threshold", "--n", "5", "--pretty"])
    assert code == 0
    report = json.loads(out)
    assert report["violations"] == [] and report["statement"] == "THRESHOLD_K4"
    assert "THRESHOLD_K4 n=5: OK" in err


@pytest.mark.parametrize("argv", [["threshold", "--n", "8"], ["threshold", "--n", "4"],
                                  ["extremal", "--n", "9"]])
def test_scale_refused_exit_3(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 3 and out == "" and "scale refused" in err


def test_budget_exceeded_exit_3(capsys):
    code, out, err = run(capsys, ["balanced", "--kind", "clique-neg", "--n", "21",
                                  "--m-max", "6", "--budget", "2000", "--strict-budget"])
    assert code == 3
    assert json.loads(out)["statistics"]["zero_sum_free_m"] == [2, 3]
    assert "budget" in err


def test_balanced_and_intersect(capsys):
    code, out, _ = run(capsys, ["balanced", "--kind", "bipartition", "--n", "9", "--m-max", "8"])
    assert code == 0
    assert json.loads(out)["statistics"]["zero_sum_m"] == [4]
    code, out, _ = run(capsys, ["intersect", "--limit", "1000000000"])
    assert code == 0 and json.loads(out)["statistics"]["intersection"] == [1, 4]


def test_extremal(capsys):
    code, out, _ = run(capsys, ["extremal", "--n", "6"])
    assert code == 0 and json.loads(out)["violation_count"] == 0


@pytest.mark.parametrize("argv", [
    ["gen", "--kind", "clique-neg", "--n", "5"],
    ["gen", "--kind", "clique-neg", "--n", "5", "--a", "9"],
    ["gen", "--kind", "extremal-k4", "--n", "6", "--j", "k1"],
    ["gen", "--kind", "nope", "--n", "5"],
    ["pell", "--family", "neg-pell", "--count", "0"],
    ["balanced", "--kind", "clique-neg", "--n", "20", "--m-max", "4"],
    ["frobnicate"],
    [],
])
def test_malformed_input_exit_1(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 1 and out == "" and err.startswith("zerosum: error")


@pytest.mark.parametrize("text", ["not json", '{"n": 3, "r": 1, "weights": [1, 0, 1]}', "{}"])
def test_verify_bad_input_exit_1(capsys, monkeypatch, text):
    code, out, _ = run(capsys, ["verify", "--m", "3"], stdin=text, monkeypatch=monkeypatch)
    assert code == 1 and out == ""


def test_verify_bad_order_exit_1(capsys, monkeypatch):
    w = '{"n":3,"r":1,"weights":[1,1,1]}'
    code, _, err = run(capsys, ["verify", "--m", "4"], stdin=w, monkeypatch=monkeypatch)
    assert code == 1 and "outside" in err


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, ["intersect", "--limit", "25", "--output", str(dest)])
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["statistics"]["s1_terms"] == [1, 4, 21]


@pytest.mark.parametrize("argv", [["threshold", "--n", "6"], ["extremal", "--n", "7"],
                                  ["balanced", "--kind", "clique-neg", "--n", "21", "--m-max", "5"],
                                  ["intersect", "--limit", "100000"]])
def test_parallelism_does_not_change_output(capsys, argv):
    _, one, _ = run(capsys, argv + ["--parallelism", "1"])
    _, many, _ = run(capsys, argv + ["--parallelism", "4"])
    assert one == many


def test_module_entry_point_pipe():
    gen = subprocess.run([sys.executable, "-m", "zerosum", "gen", "--kind", "wide-range",
                          "--n", "7", "--a", "3"], capture_output=True, text=True, check=True)
    ver = subprocess.run([sys.executable, "-m", "zerosum", "verify", "--m", "4"],
                         input=gen.stdout, capture_output=True, text=True)
    assert ver.returncode == 0
    assert json.loads(ver.stdout)["kind"] == "NONE_EXISTS"
