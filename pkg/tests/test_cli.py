"""Command-line interface: argument handling, CSV contract, exit codes."""

import json
import subprocess
import sys

import pytest

from irslab.cli import (CSV_HEADER, SEED_ENV_VAR, format_record, main,
                        parse_values)
from irslab.errors import ConfigError
from irslab.mc import MseRecord


def read_rows(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == CSV_HEADER
    return [line.split(",") for line in lines[1:]]


class TestParseValues:
    def test_comma_list(self):
        assert parse_values("1,2,4") == (1.0, 2.0, 4.0)
        assert parse_values(" 0.5, 1.5 ") == (0.5, 1.5)

    def test_range_inclusive_stop(self):
        assert parse_values("-10:20:5") == (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)

    def test_range_survives_float_accumulation(self):
        vals = parse_values("0.1:1.0:0.1")
        assert len(vals) == 10
        assert vals[-1] == pytest.approx(1.0, abs=1e-12)

    def test_descending_range(self):
        assert parse_values("4:1:-1") == (4.0, 3.0, 2.0, 1.0)

    def test_bad_specs(self):
        for bad in ("1:10", "1:10:0", "1:10:-1", "a,b", "1:b:2"):
            with pytest.raises(ConfigError):
                parse_values(bad)


def test_format_record_roundtrips_floats():
    rec = MseRecord(axis_name="snr_db", axis_value=-5.0,
                    mse_empirical=0.123456789012345678, mse_stderr=1e-300,
                    lower_bound=2.0 / 3.0, upper_bound=0.7, mse_asymptotic=0.7,
                    trials=1000, seed=42)
    fields = format_record(rec).split(",")
    assert fields[0] == "snr_db"
    assert float(fields[2]) == rec.mse_empirical
    assert float(fields[3]) == rec.mse_stderr
    assert float(fields[4]) == rec.lower_bound
    assert fields[7] == "1000" and fields[8] == "42"


class TestSweepCommand:
    def test_writes_csv_file(self, tmp_path):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep", "--axis", "m1", "--values", "1,2",
                   "--normalized", "--trials", "200", "--seed", "3",
                   "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert len(rows) == 2
        assert rows[0][0] == "irs_elements"
        assert [float(r[1]) for r in rows] == [1.0, 2.0]
        assert all(r[7] == "200" and r[8] == "3" for r in rows)
        # bracket columns are ordered on every row
        for r in rows:
            assert float(r[4]) <= float(r[5]) + 1e-15
            assert float(r[5]) == float(r[6])

    def test_stdout_default(self, capsys):
        rc = main(["sweep", "--axis", "snr", "--values", "0", "--normalized",
                   "--trials", "50", "--seed", "1"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 2

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--axis", "m1", "--values", "1,2", "--normalized",
                "--trials", "300", "--seed", "9"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_workers_flag_keeps_bytes(self, tmp_path):
        a, b = tmp_path / "w1.csv", tmp_path / "w2.csv"
        args = ["sweep", "--axis", "m1", "--values", "2", "--normalized",
                "--trials", "400", "--seed", "11"]
        assert main(args + ["--workers", "1", "--out", str(a)]) == 0
        assert main(args + ["--workers", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_failing_point_partial_csv_and_exit_1(self, tmp_path, capsys):
        out = tmp_path / "partial.csv"
        rc = main(["sweep", "--axis", "v", "--values", "1.0,-1.0,1.0",
                   "--normalized", "--trials", "50", "--seed", "2",
                   "--out", str(out)])
        assert rc == 1
        assert "error:" in capsys.readouterr().err
        rows = read_rows(out)
        assert len(rows) == 1  # the point before the failure survived
        assert float(rows[0][1]) == 1.0

    def test_unknown_axis_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--axis", "bandwidth", "--values", "1"])
        assert exc.value.code == 2

    def test_estimator_choices_enforced(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--axis", "m1", "--values", "1",
                  "--estimator", "genie"])
        assert exc.value.code == 2


class TestPointCommand:
    def test_single_row(self, tmp_path):
        out = tmp_path / "point.csv"
        rc = main(["point", "--m1", "4", "--normalized", "--trials", "100",
                   "--seed", "5", "--estimator", "asymptotic",
                   "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        assert len(rows) == 1
        assert float(rows[0][1]) == 4.0
        # asymptotic estimator sits at its own closed-form MSE: 4/5 here
        assert abs(float(rows[0][2]) - 0.8) < 5.0 * float(rows[0][3])

    def test_conflicting_noise_flags_exit_2(self, capsys):
        rc = main(["point", "--snr", "0", "--noise-variance", "1.0",
                   "--normalized", "--trials", "10"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_noise_variance_flag(self, tmp_path):
        out = tmp_path / "nv.csv"
        rc = main(["point", "--m1", "1", "--noise-variance", "0.5",
                   "--normalized", "--trials", "50", "--seed", "1",
                   "--out", str(out)])
        assert rc == 0
        rows = read_rows(out)
        # upper bound = c M1 s2 / (c M1 + s2) = 0.5/1.5
        assert float(rows[0][5]) == pytest.approx(1.0 / 3.0, rel=1e-12)


class TestSeedPrecedence:
    ARGS = ["point", "--m1", "1", "--normalized", "--trials", "10"]

    def test_flag_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "111")
        out = tmp_path / "s.csv"
        assert main(self.ARGS + ["--seed", "222", "--out", str(out)]) == 0
        assert read_rows(out)[0][8] == "222"

    def test_env_beats_config(self, tmp_path, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "111")
        out = tmp_path / "s.csv"
        assert main(self.ARGS + ["--out", str(out)]) == 0
        assert read_rows(out)[0][8] == "111"

    def test_config_default(self, tmp_path, monkeypatch):
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        cfgfile = tmp_path / "cfg.json"
        cfgfile.write_text(json.dumps({"master_seed": 333,
                                       "normalized_units": True}))
        out = tmp_path / "s.csv"
        assert main(["point", "--m1", "1", "--trials", "10",
                     "--config", str(cfgfile), "--out", str(out)]) == 0
        assert read_rows(out)[0][8] == "333"

    def test_invalid_env_seed_exits_2(self, monkeypatch, capsys):
        monkeypatch.setenv(SEED_ENV_VAR, "not-a-number")
        assert main(self.ARGS) == 2
        assert "error:" in capsys.readouterr().err


class TestValidateCommand:
    def test_fast_suite_passes(self, capsys):
        rc = main(["validate", "--fast"])
        assert rc == 0
        lines = capsys.readouterr().out.splitlines()
        summary = lines[-1]
        checks = lines[:-1]
        assert all(line.startswith("PASS ") for line in checks)
        assert summary == f"{len(checks)}/{len(checks)} checks passed"

    def test_bad_config_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        rc = main(["validate", "--fast", "--config", str(bad)])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "irslab.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "sweep" in proc.stdout and "validate" in proc.stdout
