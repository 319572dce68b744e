import json
import subprocess
import sys

import pytest

from schatten_discord import __version__
from schatten_discord.cli import main
from schatten_discord.io import read_csv
from schatten_discord.spinchain import SWEEP_COLUMNS


def run_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


class TestMeasures:
    def test_bell_vertex(self, capsys):
        doc = run_json(capsys, "measures", "1", "1", "-1")
        assert doc["Q"] == pytest.approx(1, abs=1e-12)
        assert doc["DG"] == pytest.approx(0.5, abs=1e-12)
        assert doc["D1"] == pytest.approx(1, abs=1e-12)
        assert doc["N"] == pytest.approx(1, abs=1e-12)
        assert doc["hierarchy_ok"] is True
        assert doc["meta"] == {"tool": "schatten-discord", "version": __version__, "command": "measures",
                               "seed": 0, "params": {"c": [1.0, 1.0, -1.0]}}

    def test_axis_point(self, capsys):
        doc = run_json(capsys, "measures", "0", "0", "0.7")
        assert doc["Q"] == doc["DG"] == doc["D1"] == doc["N"] == 0

    def test_outside_tetrahedron(self, capsys):
        assert main(["measures", "1", "1", "1"]) == 2
        assert "outside tetrahedron" in capsys.readouterr().err

    def test_csv(self, tmp_path):
        out = tmp_path / "m.csv"
        assert main(["measures", "0.5", "-0.3", "0.1", "--format", "csv", "--out", str(out)]) == 0
        meta, rows = read_csv(out)
        assert meta["command"] == "measures"
        assert float(rows[0]["D1"]) == pytest.approx(0.3)


class TestDeterminism:
    def test_histogram_byte_identical(self, tmp_path):
        args = ["histogram", "--n-states", "20", "--nc", "500", "--seed", "123"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b), "--threads", "3"]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a_deltas.csv").read_bytes() == (tmp_path / "b_deltas.csv").read_bytes()
        doc = json.loads(a.read_text())
        assert doc["meta"]["seed"] == 123 and sum(doc["counts"]) == 20
        meta, rows = read_csv(tmp_path / "a_deltas.csv")
        assert len(rows) == 20 and meta["seed"] == 123
        assert all(float(r["delta"]) >= -1e-9 for r in rows)

    def test_histogram_fit(self, tmp_path):
        out = tmp_path / "h.json"
        assert main(["histogram", "--n-states", "10", "--nc", "100", "--fit", "--fit-states", "10",
                     "--fit-nc", "10", "100", "1000", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["fit"]["exponent"] < 0 and len(doc["fit_points"]) == 3

    def test_histogram_csv_bins(self, tmp_path):
        out = tmp_path / "bins.csv"
        assert main(["histogram", "--n-states", "10", "--nc", "100", "--format", "csv", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert len(rows) == 40 and sum(int(r["count"]) for r in rows) == 10

    def test_seed_changes_output(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["histogram", "--n-states", "5", "--nc", "50", "--seed", "1", "--out", str(a)])
        main(["histogram", "--n-states", "5", "--nc", "50", "--seed", "2", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()


class TestOtherCommands:
    def test_xxz(self, tmp_path):
        out = tmp_path / "xxz.csv"
        assert main(["xxz", "--L", "6", "--delta-min", "-1", "--delta-max", "1.5", "--step", "0.5",
                     "--out", str(out)]) == 0
        meta, rows = read_csv(out)
        assert list(rows[0]) == list(SWEEP_COLUMNS)
        assert meta["params"]["L"] == 6 and len(rows) == 6
        guard = [r for r in rows if float(r["delta"]) == 1.0][0]
        assert guard["dE_dDelta"] == "nan"

    def test_monotonicity_map(self, tmp_path):
        out = tmp_path / "map.csv"
        assert main(["monotonicity-map", "--resolution", "11", "--out", str(out)]) == 0
        _, rows = read_csv(out)
        assert list(rows[0]) == ["c1", "c3", "dQ_dc3", "dDG_dc3", "dD1_dc3", "related_Q_DG", "related_Q_D1"]
        assert all(float(r["dD1_dc3"]) == 0 for r in rows)

    def test_channels(self, capsys):
        doc = run_json(capsys, "channels", "--samples", "200")
        assert doc["scaling"]["predicted_extended"] == pytest.approx(0.25)
        assert doc["contractivity"]["d1_after"] == 0.5
        assert doc["witness"]["dg_gain_on_removal"] == 2.0
        assert doc["sweep"]["d1_violations"] == 0

    def test_channels_single_report(self, capsys):
        doc = run_json(capsys, "channels", "--report", "witness", "--r", "0", "0", "1")
        assert set(doc) == {"witness", "meta"} and doc["witness"]["anomaly"] is False

    def test_noq_min(self, capsys):
        doc = run_json(capsys, "noq-min", "0.5", "-0.3", "0.1")
        assert doc["value"] == pytest.approx(0.3, abs=1e-12)
        assert doc["argmin_u"] == [1.0, 0.0, 0.0] and doc["at_vertex"]

    def test_oracle_d1(self, capsys):
        doc = run_json(capsys, "oracle-d1", "0.5", "-0.3", "0.1", "--nc", "2000")
        assert doc["delta"] >= -1e-9 and doc["analytic"] == pytest.approx(0.3)
        doc = run_json(capsys, "oracle-d1", "0.5", "-0.3", "0.1", "--nc", "2000", "--norm", "2")
        assert doc["delta"] >= -1e-9

    def test_bad_seed(self):
        with pytest.raises(SystemExit) as info:
            main(["measures", "0", "0", "0", "--seed", "-1"])
        assert info.value.code == 2

    def test_invalid_channel(self, capsys):
        assert main(["channels", "--q", "0.5", "0.6", "0", "0"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "schatten_discord", "measures", "1", "1", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "outside tetrahedron" in proc.stderr


def test_convergence_failure_exit_code(monkeypatch, capsys):
    from schatten_discord.linalg import ConvergenceError

    def fail(*args, **kwargs):
        raise ConvergenceError("Lanczos did not converge", 1e-3)

    monkeypatch.setattr("schatten_discord.spinchain.sweep", fail)
    assert main(["xxz", "--L", "6", "--step", "0.5"]) == 3
    assert "did not converge" in capsys.readouterr().err
