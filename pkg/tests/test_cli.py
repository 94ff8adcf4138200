"""Command-line interface: workflows, exit statuses, config handling."""

import subprocess
import sys

import pytest

from batchfrag.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalytic:
    def test_worked_example(self, capsys):
        code, out, _ = run_cli(capsys, "analytic", "-O", "10", "-B", "4",
                               "-Q", "50", "-p", "0.15")
        assert code == 0
        assert "expected_fragments    3.250000" in out
        assert "recall_probability    0.410327" in out
        assert "expected_recall_size  20.516332" in out
        assert "limit_batch_inf       7.500000" in out

    def test_unit_order_recall(self, capsys):
        code, out, _ = run_cli(capsys, "analytic", "-O", "1", "-B", "7",
                               "-Q", "50", "-p", "0.15")
        assert code == 0
        assert "expected_recall_size  7.500000" in out

    def test_order_above_quantity_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "analytic", "-O", "60", "-B", "4",
                               "-Q", "50", "-p", "0.15")
        assert code == 2
        assert "order size exceeds total quantity" in err

    def test_percent_notation(self, capsys):
        code_pct, out_pct, _ = run_cli(capsys, "analytic", "-O", "10", "-B",
                                       "4", "-Q", "50", "-p", "15%")
        code_frac, out_frac, _ = run_cli(capsys, "analytic", "-O", "10", "-B",
                                         "4", "-Q", "50", "-p", "0.15")
        assert code_pct == code_frac == 0
        assert out_pct == out_frac

    def test_missing_flag_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "analytic", "-O", "10", "-B", "4",
                               "-Q", "50")
        assert code == 2
        assert "crisis-prob" in err

    def test_out_file_mirrors_stdout(self, capsys, tmp_path):
        path = tmp_path / "analytic.txt"
        code, out, _ = run_cli(capsys, "analytic", "-O", "10", "-B", "4",
                               "-Q", "50", "-p", "0.15", "--out", str(path))
        assert code == 0
        assert path.read_text(encoding="utf-8") == out


class TestSimulate:
    def test_zero_probability_mean_is_zero(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "-O", "5", "-B", "3",
                               "-Q", "20", "-p", "0", "-n", "200",
                               "--seed", "1")
        assert code == 0
        assert "simulated_mean      0.000000" in out

    def test_repeat_runs_byte_identical(self, capsys):
        argv = ("simulate", "-O", "10", "-B", "4", "-Q", "50", "-p", "0.15",
                "-n", "500", "--seed", "42")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_dump_trial_appends_fulfillment(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "-O", "10", "-B", "4",
                               "-Q", "50", "-p", "0.15", "-n", "50",
                               "--seed", "2", "--dump-trial")
        assert code == 0
        assert "recall estimate" in out
        assert "batches (id: consumed/size, * = crisis):" in out

    def test_checkpoint_mean_near_analytic(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "-O", "1", "-B", "1",
                               "-Q", "50", "-p", "0.15", "-n", "10000",
                               "--seed", "42")
        assert code == 0
        mean = float(next(ln for ln in out.splitlines()
                          if "simulated_mean" in ln).split()[-1])
        se = float(next(ln for ln in out.splitlines()
                        if "std_error" in ln).split()[-1])
        assert abs(mean - 7.5) <= 3 * se


class TestSweep:
    def test_writes_grid_and_reports_error(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        code, out, _ = run_cli(capsys, "sweep", "-Q", "50", "-p", "0.15",
                               "--order-range", "1:3", "--batch-range", "1:3",
                               "-n", "100", "--seed", "3", "--out", str(path))
        assert code == 0
        assert f"wrote {path}" in out
        assert "mean_abs_error_pct" in out
        assert len(path.read_text().splitlines()) == 1 + 9 + 1

    def test_analytic_only_skips_error_line(self, capsys, tmp_path):
        path = tmp_path / "s.csv"
        code, out, _ = run_cli(capsys, "sweep", "-Q", "50", "-p", "0.15",
                               "--order-range", "1:3", "--batch-range", "1:3",
                               "--analytic-only", "--out", str(path))
        assert code == 0
        assert "mean_abs_error_pct" not in out

    def test_probability_family_one_file_each(self, capsys, tmp_path):
        path = tmp_path / "fam.csv"
        code, out, _ = run_cli(capsys, "sweep", "-Q", "50", "--crisis-probs",
                               "0.05,0.15,0.25", "--order-range", "1:2",
                               "--batch-range", "1:2", "--analytic-only",
                               "--out", str(path))
        assert code == 0
        for p in ("0.05", "0.15", "0.25"):
            assert (tmp_path / f"fam_p{p}.csv").exists()

    def test_divisors_only_filters_orders(self, capsys, tmp_path):
        path = tmp_path / "d.csv"
        code, _, _ = run_cli(capsys, "sweep", "-Q", "50", "-p", "0.15",
                             "--order-range", "1:10", "--batch-range", "2:2",
                             "--divisors-only", "--analytic-only",
                             "--out", str(path))
        assert code == 0
        orders = [int(ln.split(",")[0])
                  for ln in path.read_text().splitlines()[1:-1]]
        assert orders == [1, 2, 5, 10]

    def test_reversed_range_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "-Q", "50", "-p", "0.15", "--order-range", "5:2",
                  "--batch-range", "1:3", "--out", "x.csv"])
        assert exc.value.code == 2

    def test_unwritable_path_is_io_error(self, capsys):
        code, _, err = run_cli(capsys, "sweep", "-Q", "50", "-p", "0.15",
                               "--order-range", "1:2", "--batch-range", "1:2",
                               "--analytic-only",
                               "--out", "/nonexistent-dir/x.csv")
        assert code == 1
        assert "error:" in err


class TestConfigFile:
    def test_config_supplies_missing_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("quantity = 50\ncrisis-prob = 15%\n"
                       "# a comment\norder-range = 1:2\nbatch-range = 1:2\n"
                       "analytic-only = true\n", encoding="utf-8")
        path = tmp_path / "out.csv"
        code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                             "--out", str(path))
        assert code == 0
        assert "crisis_prob=0.150000" in path.read_text()

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("order-size = 10\nbatch-size = 4\nquantity = 50\n"
                       "crisis-prob = 0.15\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, "analytic", "--config", str(cfg),
                               "-B", "5")
        assert code == 0
        assert "batch_size            5" in out

    def test_unknown_key_is_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("order-sizes = 10\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "analytic", "--config", str(cfg))
        assert code == 2
        assert "unknown option" in err

    def test_missing_config_file_is_io_error(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "analytic", "--config",
                             str(tmp_path / "absent.cfg"))
        assert code == 1

    def test_bad_config_value_is_usage_error(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("crisis-prob = 1.5\norder-size = 10\n"
                       "batch-size = 4\nquantity = 50\n", encoding="utf-8")
        code, _, err = run_cli(capsys, "analytic", "--config", str(cfg))
        assert code == 2
        assert "crisis-prob" in err


class TestValidate:
    def test_reduced_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "validate", "-n", "300", "--seed", "9")
        assert code == 0
        assert "checkpoint order=1 batch=1" in out
        assert "checkpoint order=50 batch=1" in out
        assert "threshold 6.0" in out
        assert out.strip().endswith("RESULT PASS")

    def test_out_writes_the_sweep(self, capsys, tmp_path):
        path = tmp_path / "v.csv"
        code, _, _ = run_cli(capsys, "validate", "-n", "120", "--seed", "4",
                             "--out", str(path))
        assert code == 0
        assert len(path.read_text().splitlines()) == 1 + 50 * 100 + 1


class TestFragments:
    def test_single_row_curve(self, capsys, tmp_path):
        path = tmp_path / "f.csv"
        code, _, _ = run_cli(capsys, "fragments", "-O", "10",
                             "--batch-range", "4:4", "--out", str(path))
        assert code == 0
        assert path.read_text().splitlines()[1] == "4,3.250000"

    def test_twenty_row_curve(self, capsys, tmp_path):
        path = tmp_path / "f.csv"
        code, _, _ = run_cli(capsys, "fragments", "-O", "10",
                             "--batch-range", "1:20", "--out", str(path))
        assert code == 0
        assert len(path.read_text().splitlines()) == 21

    def test_missing_out_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "fragments", "-O", "10",
                               "--batch-range", "1:20")
        assert code == 2
        assert "--out" in err


class TestParserContract:
    def test_no_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_version_exits_cleanly(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "batchfrag" in capsys.readouterr().out

    def test_subcommand_help_exits_cleanly(self, capsys):
        for cmd in ("analytic", "simulate", "sweep", "validate", "fragments"):
            with pytest.raises(SystemExit) as exc:
                main([cmd, "--help"])
            assert exc.value.code == 0
            assert "--help" in capsys.readouterr().out

    def test_console_script_is_installed(self):
        proc = subprocess.run([sys.executable, "-m", "batchfrag.cli",
                               "--version"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "batchfrag" in proc.stdout
