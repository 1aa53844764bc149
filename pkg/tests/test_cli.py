import csv
import io
import json
import subprocess
import sys

import pytest

from slbt import __version__
from slbt.cli import main

A73 = ["--n", "7", "--k", "3", "--a", "7/12", "--b", "9/12", "--p", "0.6"]
A21 = ["--n", "2", "--k", "1", "--a", "7/12", "--b", "0.75", "--p", "0.6"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    return json.loads(out)


class TestParsing:
    def test_fractions_and_decimals_agree(self, capsys):
        a = run_json(capsys, "ratios", "--n", "3", "--k", "1", "--a", "7/12", "--b", "9/12")
        b = run_json(capsys, "ratios", "--n", "3", "--k", "1", "--a", "0.58333333333333333",
                     "--b", "0.75")
        assert a["params"]["a"] == 7 / 12 and a["params"]["b"] == 0.75
        assert a["results"]["rows"] == b["results"]["rows"]

    def test_ratios_values(self, capsys):
        doc = run_json(capsys, "ratios", "--n", "3", "--k", "1", "--a", "7/12", "--b", "9/12")
        rows = doc["results"]["rows"]
        assert rows[0][3] == pytest.approx(21 / 13, abs=1e-12)
        assert rows[1][3] == pytest.approx(13 / 5, abs=1e-12)
        assert doc["version"] == __version__

    @pytest.mark.parametrize("argv,flag", [
        (["solve", "--n", "2", "--k", "2", "--a", "0.6", "--b", "0.7", "--p", "0.6", "--m", "1"], "--k"),
        (["ratios", "--n", "3", "--k", "1", "--a", "1.5", "--b", "0.7"], "--a"),
        (["ratios", "--n", "3", "--k", "1", "--a", "abc", "--b", "0.7"], "--a"),
        (["solve", *A21, "--m", "-1"], "--m"),
        (["solve", "--n", "2", "--k", "1", "--a", "0.6", "--b", "0.7", "--p", "0", "--m", "1"], "--p"),
        (["gridsearch", *A21, "--costs", "1,2,3"], "--costs"),
    ])
    def test_usage_errors_name_flag(self, capsys, argv, flag):
        code, out, err = run(capsys, *argv)
        assert code == 1 and out == ""
        assert flag in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 1 and "frobnicate" in err

    def test_domain_error_exit(self, capsys):
        code, out, err = run(capsys, "solve", "--n", "3", "--k", "1", "--a", "0.5", "--b", "0.5",
                             "--p", "0.6", "--m", "2")
        assert code == 2 and out == "" and "a + b > 1" in err

    def test_guard_error_exit(self, capsys):
        code, _, err = run(capsys, "gridsearch", "--n", "4", "--k", "2", "--a", "0.7", "--b", "0.7",
                           "--p", "0.6", "--resolution", "0.1")
        assert code == 2 and "C(n,k)" in err
        code, _, _ = run(capsys, "tables", "--which", "likelihood", "--n", "9", "--k", "2",
                         "--a", "0.7", "--b", "0.7")
        assert code == 2


class TestOutputs:
    def test_solve_a73_m5(self, capsys):
        doc = run_json(capsys, "solve", *A73, "--m", "5")
        assert doc["results"]["v(5)"] == pytest.approx(1581277 / 806400, abs=1e-12)
        assert any("v(5)" in w and "2.348" in w for w in doc["warnings"])
        rows = {r[0]: r for r in doc["results"]["rows"]}
        assert rows[6][2] == 2 and rows[1][2] == 1

    def test_solve_a73_tuples(self, capsys):
        doc = run_json(capsys, "solve", *A73, "--m", "15")
        rows = {r[0]: r for r in doc["results"]["rows"]}
        assert rows[2][3] == "(2,1;2,0)" and rows[6][3] == "(2,2;1,0)"
        assert rows[0][3] is None

    def test_text_flags_discrepancies(self, capsys):
        code, out, _ = run(capsys, "tables", "--which", "values", *A21, "--m-max", "5")
        assert code == 0
        lines = out.splitlines()
        row1 = next(l for l in lines if l.strip().startswith("1 "))
        assert "0.678*" in row1 and "0.871*" in row1 and "0.485 " in row1 + " "
        row0 = next(l for l in lines if l.strip().startswith("0 "))
        assert row0.split()[1:] == ["0.300", "0.600", "0.720", "0.840", "0.888"]
        assert sum(l.startswith("* ") for l in lines) >= 2

    def test_joint_table(self, capsys):
        doc = run_json(capsys, "tables", "--which", "joint", "--n", "3", "--k", "1",
                       "--a", "7/12", "--b", "9/12")
        g = doc["results"]["rows"][-1]
        assert g[0] == "g"
        assert g[1:] == pytest.approx([7 / 192, 47 / 192, 93 / 192, 45 / 192], abs=1e-12)

    def test_likelihood_table(self, capsys):
        doc = run_json(capsys, "tables", "--which", "likelihood", "--n", "2", "--k", "1",
                       "--a", "7/12", "--b", "9/12")
        assert doc["results"]["columns"] == ["gamma", "00", "01", "10", "11"]
        for row in doc["results"]["rows"]:
            assert sum(row[1:]) == pytest.approx(1.0)

    def test_empty_request_header_only(self, capsys):
        code, out, _ = run(capsys, "solve", *A21, "--m-max", "0", "--format", "csv")
        assert code == 0 and out == "x\n"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "dist", "--n", "2", "--k", "1", "--a", "7/12", "--b", "9/12",
                           "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["x", "g(n,k)", "g(n-1,k)"]
        assert float(rows[2][1]) == 26 / 48

    def test_text_is_rounded_json(self, capsys):
        doc = run_json(capsys, "solve", *A73, "--m", "5")
        _, out, _ = run(capsys, "solve", *A73, "--m", "5", "--precision", "4")
        for row in doc["results"]["rows"]:
            assert f"{row[4]:.4f}" in out
        assert f"v(5) = {doc['results']['v(5)']:.4f}" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "solve", *A73, "--m-max", "6", "--format", "json")
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc
        from slbt import ModelA, ExplosionModel, solve
        t = solve(ModelA(7, 3, 7 / 12, 9 / 12), ExplosionModel(0.6), 6)
        for x in range(8):
            assert doc["results"]["rows"][x][1:] == [float(v) for v in t.v_xm[x, 1:]]

    def test_oracle(self, capsys):
        doc = run_json(capsys, "oracle", *A73, "--m", "15", "--x", "6")
        row = doc["results"]["rows"][0]
        assert row[3] < 1e-12 and row[4] == "(2,2;1,0)" and row[5] is True

    def test_gridsearch(self, capsys):
        doc = run_json(capsys, "gridsearch", *A21, "--resolution", "1/100")
        assert doc["results"]["rows"] == [[0.5, 0.5]]
        assert doc["results"]["min_damage"] == pytest.approx(0.4)


class TestSimulate:
    def test_seed_env_fallback(self, capsys, monkeypatch):
        argv = ["simulate", *A21, "--m", "2", "--trials", "5000"]
        monkeypatch.setenv("LBT_SEED", "77")
        a = run_json(capsys, *argv)
        b = run_json(capsys, *argv, "--seed", "77")
        c = run_json(capsys, *argv, "--seed", "78")
        assert a["params"]["seed"] == 77
        assert a["results"]["mean_destroyed"] == b["results"]["mean_destroyed"]
        assert a["results"]["mean_destroyed"] != c["results"]["mean_destroyed"]

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("LBT_SEED", "nope")
        code, _, err = run(capsys, "simulate", *A21, "--m", "2", "--trials", "10")
        assert code == 1 and "LBT_SEED" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "slbt", "ratios", "--n", "3", "--k", "1", "--a", "7/12", "--b", "9/12"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "1.615" in proc.stdout and "2.600" in proc.stdout
    bad = subprocess.run([sys.executable, "-m", "slbt", "solve", "--n", "2", "--k", "2", "--a", "0.6",
                          "--b", "0.7", "--p", "0.6", "--m", "1"], capture_output=True, text=True)
    assert bad.returncode == 1 and bad.stdout == "" and "--k" in bad.stderr
