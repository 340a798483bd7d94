import os

import pytest
from click.testing import CliRunner

from psfisher.cli import main
from psfisher.sweep import CSV_COLUMNS

SWEEP_SMALL = ["sweep", "--theta-points", "5", "--grid-t1", "2",
               "--grid-t2", "2", "--grid-ds", "2"]


@pytest.fixture
def runner():
    return CliRunner()


class TestSweepCommand:
    def test_writes_csv_and_figure(self, runner, tmp_path):
        out = tmp_path / "table.csv"
        result = runner.invoke(main, SWEEP_SMALL + ["--out", str(out)])
        assert result.exit_code == 0, result.output
        header = out.read_text().splitlines()[0]
        assert header == ",".join(CSV_COLUMNS)
        assert (tmp_path / "table.png").exists()

    def test_no_plot_skips_figure(self, runner, tmp_path):
        out = tmp_path / "table.csv"
        result = runner.invoke(main, SWEEP_SMALL + ["--out", str(out), "--no-plot"])
        assert result.exit_code == 0
        assert not (tmp_path / "table.png").exists()

    def test_byte_reproducible(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            result = runner.invoke(
                main, SWEEP_SMALL + ["--out", str(path), "--no-plot", "--seed", "5"])
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_grid_is_config_error(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep", "--grid-t1", "0",
                                      "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == 2
        assert "error:" in result.output or "error:" in (result.stderr or "")


class TestCheckInequalityCommand:
    ARGS = ["check-inequality", "--trials", "25", "--max-dim", "3", "--seed", "4"]

    def test_small_audit_passes(self, runner):
        result = runner.invoke(main, self.ARGS)
        assert result.exit_code == 0, result.output
        assert "failures = 0" in result.output
        assert "trials = 25" in result.output

    def test_reproducible_output_file(self, runner, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            result = runner.invoke(main, self.ARGS + ["--out", str(path)])
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_margin_histogram(self, runner, tmp_path):
        fig = tmp_path / "margins.png"
        result = runner.invoke(main, self.ARGS + ["--plot", str(fig)])
        assert result.exit_code == 0
        assert fig.exists() and fig.stat().st_size > 0

    def test_zero_trials_rejected(self, runner):
        result = runner.invoke(main, ["check-inequality", "--trials", "0"])
        assert result.exit_code == 2

    def test_bad_dims_rejected(self, runner):
        result = runner.invoke(
            main, ["check-inequality", "--min-dim", "5", "--max-dim", "3"])
        assert result.exit_code == 2


class TestMcCommand:
    ARGS = ["mc", "--n", "200", "--reps", "3", "--seed", "8"]

    def test_summary_to_stdout(self, runner):
        result = runner.invoke(main, self.ARGS)
        assert result.exit_code == 0, result.output
        assert "postselected-position" in result.output
        assert "joint-position-ideal" in result.output

    def test_reproducible_summary_file(self, runner, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            result = runner.invoke(main, self.ARGS + ["--out", str(path)])
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero_reps_rejected(self, runner):
        result = runner.invoke(main, ["mc", "--reps", "0"])
        assert result.exit_code == 2

    def test_figure_rendered(self, runner, tmp_path):
        fig = tmp_path / "mc.png"
        result = runner.invoke(main, self.ARGS + ["--plot", str(fig)])
        assert result.exit_code == 0
        assert fig.exists() and fig.stat().st_size > 0


class TestConfigFile:
    def test_config_supplies_defaults(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("theta-points = 5\n"
                       "grid-t1 = 2\n"
                       "grid-t2 = 2  # comment\n"
                       "\n"
                       "grid-ds = 2\n")
        out = tmp_path / "t.csv"
        result = runner.invoke(main, ["sweep", "--config", str(cfg),
                                      "--out", str(out), "--no-plot"])
        assert result.exit_code == 0, result.output
        # header + 5 theta points x 8 selections
        assert len(out.read_text().splitlines()) == 1 + 5 * 8

    def test_flag_beats_config(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("theta-points = 5\ngrid-t1 = 2\ngrid-t2 = 2\ngrid-ds = 2\n")
        out = tmp_path / "t.csv"
        result = runner.invoke(main, ["sweep", "--config", str(cfg),
                                      "--theta-points", "3",
                                      "--out", str(out), "--no-plot"])
        assert result.exit_code == 0
        assert len(out.read_text().splitlines()) == 1 + 3 * 8

    def test_unknown_key_rejected(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("widgets = 3\n")
        result = runner.invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == 2

    def test_malformed_line_rejected(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("just some words\n")
        result = runner.invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == 2

    def test_bad_value_type_rejected(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("theta-points = soon\n")
        result = runner.invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == 2


class TestHelp:
    @pytest.mark.parametrize("args", [[], ["sweep"], ["check-inequality"], ["mc"]])
    def test_help_exits_cleanly(self, runner, args):
        result = runner.invoke(main, args + ["--help"])
        assert result.exit_code == 0
        assert "--help" in result.output
