import csv
import json

import numpy as np
import pytest

from pcompact import serialize as ser
from pcompact.cli import main


def run_cli(args):
    return main(args)


class TestExitCodes:
    def test_example_a_ok(self, tmp_path, capsys):
        out = tmp_path / "a.csv"
        code = run_cli(["example-a", "--p", "2", "--m-max", "4",
                        "--budget", "8", "--out", str(out)])
        assert code == 0
        rows = list(csv.DictReader(open(out)))
        assert [r["m"] for r in rows] == ["1", "2", "3", "4"]
        assert all(r["valid"] == "True" for r in rows)

    def test_malformed_json_is_config_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not valid json")
        assert run_cli(["mp", "--instance", str(bad)]) == 1

    def test_missing_file_is_io_error(self, tmp_path):
        assert run_cli(["mp", "--instance",
                        str(tmp_path / "nope.json")]) == 1

    def test_corrupted_certificate_exits_2(self, tmp_path):
        # a point deliberately outside the hull of the generators
        inst = tmp_path / "inst.json"
        obj = ser.instance_to_json(2, [[2.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]])
        inst.write_text(json.dumps(obj))
        out = tmp_path / "r.csv"
        code = run_cli(["mp", "--instance", str(inst), "--out", str(out)])
        assert code == 2
        rows = list(csv.DictReader(open(out)))  # report still written
        assert rows and rows[0]["valid"] == "False"

    def test_mp_ok(self, tmp_path):
        inst = tmp_path / "inst.json"
        obj = ser.instance_to_json(2, [[0.6, 0.8]], [[1.0, 0.0], [0.0, 1.0]])
        inst.write_text(json.dumps(obj))
        assert run_cli(["mp", "--instance", str(inst),
                        "--out", str(tmp_path / "r.csv")]) == 0


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path):
        outs = []
        for name in ("r1.csv", "r2.csv"):
            out = tmp_path / name
            run_cli(["example-b", "--p", "2", "--m-max", "4",
                     "--budget", "32", "--seed", "7", "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_json_mirrors_csv(self, tmp_path):
        csv_out = tmp_path / "r.csv"
        json_out = tmp_path / "r.json"
        args = ["radius", "--family", "B", "--m-max", "8", "--budget", "8"]
        run_cli(args + ["--out", str(csv_out)])
        run_cli(args + ["--format", "json", "--out", str(json_out)])
        crows = list(csv.DictReader(open(csv_out)))
        jobj = json.loads(json_out.read_text())
        assert jobj["columns"] == list(crows[0].keys())
        for cr, jr in zip(crows, jobj["rows"]):
            for col in jobj["columns"]:
                assert str(jr[col]) == cr[col]


class TestSuites:
    def test_radius_family_b(self, capsys):
        code = run_cli(["radius", "--family", "B", "--m-max", "8",
                        "--budget", "8", "--format", "json"])
        assert code == 0
        obj = json.loads(capsys.readouterr().out)
        row = obj["rows"][0]
        assert row["verdict"] == "yes"
        assert 0.8 <= row["window_lower"] <= 1.0

    def test_radius_family_b_at_e1(self, capsys):
        code = run_cli(["radius", "--family", "B", "--m-max", "8",
                        "--at", "e1", "--budget", "8", "--format", "json"])
        assert code == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["rows"][0]["verdict"] == "no"

    def test_beta_default_run(self, capsys):
        assert run_cli(["beta", "--eps", "0.2"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("block,size,threshold,growth,valid")

    def test_factorize(self, tmp_path):
        from tests_util import random_poly
        rng = np.random.default_rng(0)
        P = random_poly(rng, 2, 3, 2)
        inst = tmp_path / "poly.json"
        inst.write_text(json.dumps(ser.polynomial_to_json(P)))
        assert run_cli(["factorize", "--instance", str(inst), "--p", "2",
                        "--eps", "0.1", "--budget", "16",
                        "--out", str(tmp_path / "f.csv")]) == 0

    def test_suite_runs_concurrently(self, tmp_path):
        out = tmp_path / "suite.csv"
        code = run_cli(["suite", "--m-max", "4", "--budget", "8",
                        "--jobs", "2", "--out", str(out)])
        assert code == 0
        rows = list(csv.DictReader(open(out)))
        assert {r["route"] for r in rows} >= {"example-a", "example-b",
                                              "beta", "radius"}

    def test_seminorm(self, capsys):
        code = run_cli(["seminorm", "--family", "B", "--m-max", "4",
                        "--eps", "0.25", "--budget", "8"])
        assert code == 0

    def test_invalid_exponent_is_config_error(self):
        assert run_cli(["example-a", "--p", "0.5"]) == 1
