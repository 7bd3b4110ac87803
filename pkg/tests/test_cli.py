import csv
import io
import json
import math

import pytest

from qdeco.cli import emit_sweep, run


def run_capture(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEmitSweep:
    def test_single_row_csv(self):
        text = emit_sweep([(1.0, 0.1)], ["t_s", "l_cm"], "csv")
        assert text == "t_s,l_cm\n1,0.1\n"

    def test_empty_rows_header_only(self):
        assert emit_sweep([], ["a", "b"], "csv") == "a,b\n"

    def test_ragged_rows_rejected(self):
        with pytest.raises(ValueError):
            emit_sweep([(1.0, 2.0), (3.0,)], ["a", "b"], "csv")

    def test_json_array_of_objects(self):
        text = emit_sweep([(1.0, 0.5)], ["x", "y"], "json")
        data = json.loads(text)
        assert data == [{"x": 1.0, "y": 0.5}]

    def test_csv_round_trip_at_12_digits(self):
        rows = [
            (t, math.cos(0.37 * t) ** 2, math.exp(-0.11 * t))
            for t in [k * 0.173 for k in range(100)]
        ]
        text = emit_sweep(rows, ["t", "coherence", "entropy"], "csv")
        parsed = list(csv.DictReader(io.StringIO(text)))
        assert len(parsed) == 100
        for row, (t, c, s) in zip(parsed, rows):
            for key, ref in (("t", t), ("coherence", c), ("entropy", s)):
                assert format(float(row[key]), ".12g") == format(ref, ".12g")


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        code, _, _ = run_capture(capsys, ["warp"])
        assert code == 2

    def test_unknown_flag(self, capsys):
        code, _, _ = run_capture(capsys, ["thermal", "length", "--time-s", "1", "--bogus", "2"])
        assert code == 2

    def test_missing_required(self, capsys):
        code, _, err = run_capture(capsys, ["thermal", "length"])
        assert code == 2
        assert "--time-s" in err

    def test_unparseable_value(self, capsys):
        code, _, _ = run_capture(capsys, ["thermal", "length", "--time-s", "soon"])
        assert code == 2

    def test_validation_failure(self, capsys):
        code, _, err = run_capture(capsys, ["thermal", "length", "--time-s", "0"])
        assert code == 1
        assert "validation" in err

    def test_zero_field_is_validation_failure(self, capsys):
        code, _, _ = run_capture(capsys, ["field", "coherence-length", "--efield-v-per-cm", "0"])
        assert code == 1

    def test_success(self, capsys):
        code, out, _ = run_capture(capsys, ["thermal", "length", "--time-s", "1"])
        assert code == 0
        assert json.loads(out)["outputs"]["length_cm"] == 0.1


class TestReports:
    def test_coherence_length_report(self, capsys):
        code, out, _ = run_capture(
            capsys, ["field", "coherence-length", "--efield-v-per-cm", "1e7"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["tool"] == "qdeco"
        assert report["provenance"]["version"]
        assert report["subcommand"] == "field coherence-length"
        assert report["outputs"]["length_cm"] == pytest.approx(5.45e-4, rel=1e-2)
        assert report["inputs"]["efield_v_per_cm"] == 1e7

    def test_superselect_report(self, capsys):
        code, out, _ = run_capture(
            capsys, ["lattice", "superselect", "--sites", "2", "--emax", "1",
                     "--left-field", "0"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["outputs"]["physical_dim"] == 7
        assert report["outputs"]["max_cross"] <= 1e-12
        assert report["outputs"]["sectors"] == {"-1": 2, "0": 3, "1": 2}
        assert report["outputs"]["wilson_contrast_cross"] > 0.1

    def test_identity_check_report(self, capsys):
        code, out, _ = run_capture(
            capsys, ["lattice", "identity-check", "--sites", "2", "--emax", "1",
                     "--seed", "5"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["outputs"]["max_identity_residual"] <= 1e-12
        assert report["outputs"]["max_kernel_residual"] <= 1e-12
        assert report["provenance"]["seed"] == 5

    def test_dephasing_csv_sweep(self, capsys):
        code, out, _ = run_capture(
            capsys, ["dephasing", "--spins", "2", "--coupling", "1.0",
                     "--t-max", "1.0", "--steps", "4", "--format", "csv"]
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "t,coherence,entropy"
        assert len(lines) == 5

    def test_dephasing_json_has_rows_and_oracle(self, capsys):
        code, out, _ = run_capture(
            capsys, ["dephasing", "--spins", "3", "--coupling", "0.5,1.0,1.5",
                     "--t-max", "2.0", "--steps", "7"]
        )
        assert code == 0
        report = json.loads(out)
        assert len(report["rows"]) == 7
        assert report["outputs"]["max_oracle_deviation"] <= 1e-10
        assert report["outputs"]["entropy_max_deviation"] <= 1e-9

    def test_tripartite_report(self, capsys):
        c = 1.0 / math.sqrt(2.0)
        code, out, _ = run_capture(
            capsys, ["tripartite", "--coeffs", f"{c},{c}", "--env-overlap", "0.2"]
        )
        assert code == 0
        report = json.loads(out)
        assert report["outputs"]["coherence_norm"] == pytest.approx(0.2, abs=1e-12)

    def test_tripartite_bad_coeffs_is_validation_error(self, capsys):
        code, _, _ = run_capture(
            capsys, ["tripartite", "--coeffs", "1.0,1.0", "--env-overlap", "0.2"]
        )
        assert code == 1

    def test_scalar_csv_format(self, capsys):
        code, out, _ = run_capture(
            capsys, ["thermal", "length", "--time-s", "1", "--format", "csv"]
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "length_cm"
        assert lines[1] == "0.1"


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["field", "coherence-length", "--efield-v-per-cm", "1e7"],
            ["lattice", "identity-check", "--sites", "2", "--emax", "1", "--seed", "11"],
            ["dephasing", "--spins", "2", "--coupling", "1.0", "--t-max", "1.0",
             "--steps", "5", "--format", "csv"],
        ],
    )
    def test_repeat_invocations_identical(self, capsys, argv):
        _, out1, _ = run_capture(capsys, argv)
        _, out2, _ = run_capture(capsys, argv)
        assert out1 == out2

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, out, _ = run_capture(
            capsys, ["thermal", "length", "--time-s", "4"]
        )
        code2 = run(["thermal", "length", "--time-s", "4", "--out", str(path)])
        capsys.readouterr()
        assert code == code2 == 0
        assert path.read_text() == out

    def test_json_keys_sorted(self, capsys):
        _, out, _ = run_capture(capsys, ["thermal", "length", "--time-s", "1"])
        report = json.loads(out)
        assert list(report) == sorted(report)
        assert list(report["outputs"]) == sorted(report["outputs"])


class TestConfigFile:
    def test_values_from_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("time_s = 1\nlambda_cm2s = 100  # default rate\n")
        code, out, _ = run_capture(capsys, ["thermal", "length", "--config", str(cfg)])
        assert code == 0
        assert json.loads(out)["outputs"]["length_cm"] == 0.1

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("time_s = 1\n")
        code, out, _ = run_capture(
            capsys, ["thermal", "length", "--config", str(cfg), "--time-s", "100"]
        )
        assert code == 0
        assert json.loads(out)["outputs"]["length_cm"] == pytest.approx(0.01)

    def test_unknown_key_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("time_s = 1\ntemperature = 300\n")
        code, _, err = run_capture(capsys, ["thermal", "length", "--config", str(cfg)])
        assert code == 2
        assert "temperature" in err

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, _ = run_capture(
            capsys, ["thermal", "length", "--config", str(tmp_path / "nope.cfg")]
        )
        assert code == 2

    def test_malformed_line_rejected(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("time_s 1\n")
        code, _, _ = run_capture(capsys, ["thermal", "length", "--config", str(cfg)])
        assert code == 2


class TestTripartiteEdgeCases:
    def test_identical_environments_allowed(self, capsys):
        c = 1.0 / math.sqrt(2.0)
        code = run(["tripartite", "--coeffs", f"{c},{c}", "--env-overlap", "1.0"])
        out = capsys.readouterr().out
        assert code == 0
        assert json.loads(out)["outputs"]["coherence_norm"] == pytest.approx(1.0)

    def test_inadmissible_overlap_rejected(self, capsys):
        code = run(["tripartite", "--coeffs", "0.5,0.5,0.5,0.5", "--env-overlap", "-0.9"])
        capsys.readouterr()
        assert code == 1
