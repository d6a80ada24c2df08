"""Tests for the command-line front end: config handling, determinism, exit codes."""

import json
import math

import pytest

from qmet.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from qmet.models import reference


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main(list(argv) + ["--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return code, text


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    return header, rows


class TestConfigHandling:
    def test_unknown_model_is_config_error(self, tmp_path):
        code, _ = run(tmp_path, "qfi", "--model", "no-such-model",
                      "--theta", "0.5:1.5:2", "--t", "1:2:2")
        assert code == EXIT_CONFIG

    def test_empty_grid_is_config_error(self, tmp_path):
        code, _ = run(tmp_path, "qfi", "--theta", "0.5:1.5:0", "--t", "1:2:2")
        assert code == EXIT_CONFIG

    def test_malformed_grid_is_config_error(self, tmp_path):
        code, _ = run(tmp_path, "qfi", "--theta", "0.5,1.5,3", "--t", "1:2:2")
        assert code == EXIT_CONFIG

    def test_missing_config_file_is_config_error(self, tmp_path):
        code, _ = run(tmp_path, "qfi", "--config", str(tmp_path / "absent.ini"))
        assert code == EXIT_CONFIG

    def test_unknown_model_parameter_rejected(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[model]\nname = qubit-direction\nkappa = 0.5\n")
        code, _ = run(tmp_path, "qfi", "--config", str(ini))
        assert code == EXIT_CONFIG

    def test_config_file_with_flag_override(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text(
            "[model]\nname = qubit-direction\nomega = 1.0\n"
            "[grid]\ntheta = 0.5:1.5:2\nt = 0.8:1.6:2\n"
            "[run]\nseed = 3\n"
        )
        code, text = run(tmp_path, "qfi", "--config", str(ini), "--theta", "0.6:1.2:3")
        assert code == EXIT_OK
        _, rows = parse_csv(text)
        assert len(rows) == 3 * 2
        assert float(rows[0]["theta"]) == pytest.approx(0.6)


class TestDeterminism:
    def test_identical_runs_identical_bytes(self, tmp_path):
        args = ("gbound", "--model", "qubit-direction",
                "--theta", "0.4:2.6:4", "--t", "0.5:2.5:3", "--seed", "11")
        _, first = run(tmp_path, *args)
        _, second = run(tmp_path, *args)
        assert first == second
        assert first.startswith("# qmet ")

    def test_thread_count_does_not_change_output(self, tmp_path, monkeypatch):
        args = ("qfi", "--model", "qubit-direction", "--theta", "0.4:2.6:4",
                "--t", "0.5:2.5:3", "--seed", "1")
        _, serial = run(tmp_path, *args)
        monkeypatch.setenv("QMET_THREADS", "4")
        _, threaded = run(tmp_path, *args)
        assert serial == threaded

    def test_bad_thread_env_is_config_error(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QMET_THREADS", "many")
        code, _ = run(tmp_path, "qfi", "--theta", "0.5:1.5:2", "--t", "1:2:2")
        assert code == EXIT_CONFIG


class TestNumericalFailures:
    def test_domain_boundary_is_exit_three(self, tmp_path, capsys):
        code, _ = run(tmp_path, "qfi", "--model", "qubit-direction",
                      "--theta", "0.000001:1:3", "--t", "1:2:2")
        assert code == EXIT_NUMERICAL
        assert "grid point" in capsys.readouterr().err


class TestSweepOutputs:
    def test_qfi_columns_and_reference_agreement(self, tmp_path):
        code, text = run(tmp_path, "qfi", "--model", "qubit-direction",
                         "--theta", "0.5:2.5:3", "--t", "0.4:2.0:3")
        assert code == EXIT_OK
        header, rows = parse_csv(text)
        assert header == ["theta", "t", "qfi", "qfi_ref", "abs_err",
                          "max_qfi", "max_qfi_ref", "max_abs_err"]
        for row in rows:
            assert float(row["abs_err"]) < 1e-5
            assert float(row["max_abs_err"]) < 1e-5

    def test_gbound_gamma_below_one(self, tmp_path):
        code, text = run(tmp_path, "gbound", "--model", "qubit-direction",
                         "--theta", "0.5:2.5:3", "--t", "0.4:2.0:3")
        assert code == EXIT_OK
        header, rows = parse_csv(text)
        assert header == ["theta", "t", "g", "g_ref", "abs_err",
                          "condition", "max_qfi", "gamma"]
        for row in rows:
            assert row["condition"] == "1"
            assert float(row["gamma"]) <= 1.0 + 1e-9
            ratio = float(row["max_qfi"]) / float(row["g"])
            assert float(row["gamma"]) == pytest.approx(ratio, abs=1e-12)

    def test_phase_sim_columns(self, tmp_path):
        code, text = run(tmp_path, "phase-sim", "--model", "qubit-direction",
                         "--theta", "1.0:1.0:1", "--t", "1.0:1.0:1",
                         "--n", "4", "--m", "2")
        assert code == EXIT_OK
        header, rows = parse_csv(text)
        assert header == ["n", "m", "tau", "theta", "t", "fi_ideal", "fi_realistic",
                          "g", "ratio_ideal", "ratio_realistic"]
        row = rows[0]
        assert 0 <= float(row["ratio_realistic"]) <= 1.001
        assert 0 <= float(row["ratio_ideal"]) <= 1.001

    def test_optimize_report(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[optimizer]\nrestarts = 1\niterations = 30\n")
        out = tmp_path / "report.json"
        code = main(["optimize", "--config", str(ini), "--model", "qubit-direction",
                     "--theta", "1.0:1.0:1", "--t", "1.0:1.0:1",
                     "--seed", "5", "--out", str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["restarts"] == 1
        assert "wall_time_s" in payload
        rec = payload["records"][0]
        assert rec["rel_gap"] <= 0.01  # seeded restart reaches the bound

    def test_jc_divergent_flag(self, tmp_path):
        ini = tmp_path / "run.ini"
        ini.write_text("[model]\nname = jaynes-cummings\nalpha1_sq = 1.0\nkappa = 0.5\n")
        code, text = run(tmp_path, "jc", "--config", str(ini),
                         "--theta", "0.8:1.4:2", "--t", "0.7:1.9:2")
        assert code == EXIT_OK
        _, rows = parse_csv(text)
        for row in rows:
            assert row["gamma_divergent"] == "1"
            assert float(row["fq_ref"]) == 0.0
            omega, t = float(row["omega"]), float(row["t"])
            expected = (0.5 * math.sqrt(omega) * t / omega) ** 2
            assert float(row["fc_sim"]) == pytest.approx(expected, rel=1e-6)

    def test_jc_simulation_tracks_closed_form(self, tmp_path):
        code, text = run(tmp_path, "jc", "--model", "jaynes-cummings",
                         "--theta", "0.6:1.8:3", "--t", "0.5:2.5:3")
        assert code == EXIT_OK
        _, rows = parse_csv(text)
        for row in rows:
            assert float(row["fc_sim"]) == pytest.approx(float(row["fc_ref"]),
                                                         rel=1e-6, abs=1e-9)

    def test_oscillator_region(self, tmp_path):
        code, text = run(tmp_path, "oscillator", "--t", "0.3:12.0:40")
        assert code == EXIT_OK
        header, rows = parse_csv(text)
        assert header == ["omega", "t", "fq_ref", "fc_ref", "gamma",
                          "gamma_gt1", "small_sine_region"]
        for row in rows:
            assert row["gamma_gt1"] == row["small_sine_region"]
            gamma = reference("oscillator_gamma")(omega=1.0, t=float(row["t"]))
            assert float(row["gamma"]) == pytest.approx(gamma, rel=1e-12)

    def test_json_format(self, tmp_path):
        code, text = run(tmp_path, "oscillator", "--t", "0.3:2.0:3", "--format", "json")
        assert code == EXIT_OK
        payload = json.loads(text)
        assert payload["columns"][0] == "omega"
        assert len(payload["records"]) == 3
