"""Tests for grid planning, ranking, the run ledger and resumable search."""
import json
from unittest.mock import MagicMock

import pytest
from pydantic import ValidationError

from config.grids import GridSpec, classify_grid, pendulum_grid
from config.train_config import LrSchedule, TrainConfig
from interfaces.errors import ConfigError, DivergenceError
from interfaces.models import TaskType
from training.grid_search import LEDGER_FILE, execute_run, grid_search, plan_runs, rank_runs
from training.ledger import STATUS_FAILED, STATUS_OK, LedgerEntry, RunLedger
from training.trainer import RunRecord


def small_spec(n_seeds=2, task=TaskType.PENDULUM) -> GridSpec:
    return GridSpec(
        base=TrainConfig(task=task, epochs=1),
        axes={"lr": [0.1, 0.01], "hidden_channels": [2, 4]},
        n_seeds=n_seeds,
    )


def lr_runner(config: TrainConfig) -> RunRecord:
    """Stand-in for train(): the metric is the learning rate, identical across seeds."""
    return RunRecord(config={}, fingerprint=config.fingerprint(), task=config.task.value,
                     metric="rmse", seed=config.seed, final_metric=config.lr, wall_time=0.0)


class TestGridSpec:
    """Test grid definitions."""

    def test_preset_sizes(self):
        """Test the pendulum and classification presets have 256 and 288 points."""
        assert pendulum_grid().size == 256
        assert classify_grid().size == 288
        assert len(classify_grid().combinations()) == 288

    def test_preset_protocols(self):
        """Test the presets carry their batch size, epochs, split, seeds and lr schedule."""
        pendulum = pendulum_grid()
        assert (pendulum.base.batch_size, pendulum.base.epochs, pendulum.n_seeds) == (16, 100, 4)
        assert pendulum.base.schedule is LrSchedule.CONSTANT
        assert pendulum.base.data.validation is True
        point = pendulum.config_for(pendulum.combinations()[-1], 3)
        assert (point.batch_size, point.data.validation, point.seed) == (16, True, 3)

        classify = classify_grid()
        assert classify.base.epochs == 200
        assert classify.base.lr_schedule is LrSchedule.LINEAR
        assert classify_grid(epochs=5).base.epochs == 5

    @pytest.mark.parametrize("axes", [{"data": [None]}, {"seed": [1]}, {"nonsense": [1]}, {"lr": []}])
    def test_bad_axes(self, axes):
        """Test reserved, unknown and empty axes are rejected."""
        with pytest.raises(ValidationError):
            GridSpec(axes=axes)

    def test_unknown_top_level_key(self):
        """Test grid files reject unknown keys."""
        with pytest.raises(ValidationError):
            GridSpec.model_validate({"axes": {}, "repeats": 3})

    def test_invalid_point(self):
        """Test an axis value that breaks the config raises a config error."""
        spec = GridSpec(axes={"lr": [-1.0]})
        with pytest.raises(ConfigError):
            spec.config_for(spec.combinations()[0], 0)


class TestPlanRuns:
    """Test run expansion."""

    def test_counts_and_seeds(self):
        """Test 4 points x 3 seeds with seeds base.seed + k innermost."""
        runs = plan_runs(small_spec(n_seeds=3))
        assert len(runs) == 12
        assert [r.seed for r in runs[:3]] == [0, 1, 2]
        assert [r.combo_index for r in runs[:4]] == [0, 0, 0, 1]
        assert len({r.run_key for r in runs}) == 12

    def test_zero_seeds(self):
        """Test n_seeds = 0 is a config error."""
        with pytest.raises(ConfigError):
            plan_runs(small_spec(), n_seeds=0)


class TestRankRuns:
    """Test aggregation and ordering."""

    def test_identical_seeds_have_zero_std(self):
        """Test equal metrics across seeds give std 0 and RMSE ranks ascending."""
        summary = grid_search(small_spec(), threads=1, runner=lr_runner)
        assert [r.std for r in summary.ranking] == [0.0] * 4
        assert [r.mean for r in summary.ranking] == [0.01, 0.01, 0.1, 0.1]
        assert summary.best.combo_index == 2
        assert summary.n_runs == 8

    def test_accuracy_ranks_descending(self):
        """Test higher accuracy ranks first."""
        entries = [
            LedgerEntry("a", 0, 0, STATUS_OK, final_metric=0.5),
            LedgerEntry("b", 1, 0, STATUS_OK, final_metric=0.9),
        ]
        summary = rank_runs([{"lr": 1}, {"lr": 2}], entries, "accuracy", 1)
        assert [r.combo_index for r in summary.ranking] == [1, 0]
        assert summary.across_mean == pytest.approx(0.7)

    def test_failed_configs_last(self):
        """Test a point with a diverged run ranks after every healthy point."""
        def runner(config):
            if config.lr == 0.01 and config.seed == 1:
                raise DivergenceError("diverged", epoch=0)
            return lr_runner(config)

        summary = grid_search(small_spec(), threads=1, runner=runner)
        assert [r.failed for r in summary.ranking] == [False, False, True, True]
        assert summary.n_failed_runs == 2
        assert summary.ranking[0].mean == 0.1

    @pytest.mark.parametrize("error", [ValueError("bad shape"), ZeroDivisionError("division by zero")])
    def test_numeric_errors_become_failed_rows(self, error, tmp_path):
        """Test value and arithmetic errors are written as failed ledger rows."""
        run = plan_runs(small_spec(n_seeds=1))[0]
        entry = execute_run(run, runner=MagicMock(side_effect=error))
        assert entry.status == STATUS_FAILED
        assert entry.error == str(error)
        assert entry.final_metric is None

        summary = grid_search(small_spec(n_seeds=1), out_dir=tmp_path, threads=1,
                              runner=MagicMock(side_effect=error))
        assert summary.n_failed_runs == 4
        rows = RunLedger(tmp_path / LEDGER_FILE).entries()
        assert len(rows) == 4 and all(row.status == STATUS_FAILED for row in rows)

    def test_threaded_matches_serial(self):
        """Test a thread pool gives the same summary."""
        serial = grid_search(small_spec(), threads=1, runner=lr_runner)
        threaded = grid_search(small_spec(), threads=3, runner=lr_runner)
        assert threaded.to_dict() == serial.to_dict()


class TestResumableSearch:
    """Test the ledger-backed search."""

    def test_restart_skips_finished_runs(self, tmp_path):
        """Test a second search with the same ledger trains nothing and ranks identically."""
        first_runner = MagicMock(side_effect=lr_runner)
        first = grid_search(small_spec(), out_dir=tmp_path, threads=1, runner=first_runner)
        assert first_runner.call_count == 8

        second_runner = MagicMock(side_effect=lr_runner)
        second = grid_search(small_spec(), out_dir=tmp_path, threads=1, runner=second_runner)
        assert second_runner.call_count == 0
        assert second.to_dict() == first.to_dict()

    def test_partial_ledger(self, tmp_path):
        """Test only the missing runs are trained after an interruption."""
        runs = plan_runs(small_spec())
        ledger = RunLedger(tmp_path / LEDGER_FILE)
        for run in runs[:5]:
            ledger.append(LedgerEntry(run.run_key, run.combo_index, run.seed, STATUS_OK, final_metric=run.config.lr))
        runner = MagicMock(side_effect=lr_runner)
        grid_search(small_spec(), out_dir=tmp_path, threads=1, runner=runner)
        assert runner.call_count == 3


class TestRunLedger:
    """Test the JSONL ledger file."""

    def test_torn_last_line(self, tmp_path):
        """Test a partial trailing line is skipped and later appends stay readable."""
        path = tmp_path / LEDGER_FILE
        good = LedgerEntry("k1", 0, 0, STATUS_OK, final_metric=0.5)
        path.write_text(json.dumps(good.to_dict()) + "\n" + '{"run_key": "k2", "combo', encoding="utf-8")
        ledger = RunLedger(path)
        assert len(ledger) == 1 and "k1" in ledger
        ledger.append(LedgerEntry("k3", 1, 0, STATUS_FAILED, error="boom"))
        reloaded = RunLedger(path)
        assert len(reloaded) == 2
        assert not reloaded.get("k3").ok

    def test_in_memory(self):
        """Test a ledger without a path keeps entries in memory."""
        ledger = RunLedger()
        ledger.append(LedgerEntry("k", 0, 0, STATUS_OK, final_metric=1.0))
        assert ledger.entries()[0].final_metric == 1.0
