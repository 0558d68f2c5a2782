"""Grid search: every grid point x n_seeds runs, aggregated and ranked.

Run k of a grid point uses seed base.seed + k. Finished runs go to the
ledger before the next one starts, so a restarted search skips them and
ranks the same results. The ranking sorts RMSE ascending and accuracy
descending; grid points with any failed run come last in grid order.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from config.grids import GridSpec
from config.settings import SettingsManager
from config.train_config import TrainConfig
from interfaces.errors import ConfigError, DivergenceError, LaconvError
from interfaces.models import TaskType
from metrics.reports import REPORT_VERSION
from training.ledger import STATUS_FAILED, STATUS_OK, LedgerEntry, RunLedger
from training.trainer import RunRecord, train

logger = structlog.get_logger(__name__)

LEDGER_FILE = "ledger.jsonl"


@dataclass
class PlannedRun:
    run_key: str
    combo_index: int
    seed: int
    config: TrainConfig


@dataclass_json
@dataclass
class RankedConfig:
    rank: int
    combo_index: int
    params: Dict[str, Any]
    mean: Optional[float]
    std: Optional[float]
    n_runs: int
    n_failed: int
    failed: bool
    metrics: List[float] = field(default_factory=list)


@dataclass_json
@dataclass
class GridSummary:
    metric: str
    n_configs: int
    n_seeds: int
    n_runs: int
    n_failed_runs: int
    across_mean: Optional[float]
    across_std: Optional[float]
    ranking: List[RankedConfig] = field(default_factory=list)
    report_version: int = REPORT_VERSION

    @property
    def best(self) -> Optional[RankedConfig]:
        return self.ranking[0] if self.ranking and not self.ranking[0].failed else None


def metric_name(task: TaskType) -> str:
    return "accuracy" if task is TaskType.CLASSIFY else "rmse"


def plan_runs(spec: GridSpec, n_seeds: Optional[int] = None) -> List[PlannedRun]:
    """Expand the grid into (grid point, seed) runs in grid order, seeds innermost."""
    n_seeds = spec.n_seeds if n_seeds is None else n_seeds
    if n_seeds < 1:
        raise ConfigError(f"n_seeds must be at least 1, got {n_seeds}")
    runs = []
    for index, combo in enumerate(spec.combinations()):
        for k in range(n_seeds):
            config = spec.config_for(combo, spec.base.seed + k)
            runs.append(PlannedRun(config.fingerprint(), index, config.seed, config))
    return runs


def execute_run(run: PlannedRun, runner: Callable[[TrainConfig], RunRecord] = train) -> LedgerEntry:
    """Train one run; divergence and numerical failures are recorded, not raised."""
    try:
        record = runner(run.config)
    except DivergenceError as e:
        logger.warning("grid_run_diverged", run_key=run.run_key, epoch=e.epoch)
        return LedgerEntry(run.run_key, run.combo_index, run.seed, STATUS_FAILED, error=str(e), epoch=e.epoch)
    except (LaconvError, ArithmeticError, ValueError) as e:
        logger.warning("grid_run_failed", run_key=run.run_key, error=str(e), error_type=type(e).__name__)
        return LedgerEntry(run.run_key, run.combo_index, run.seed, STATUS_FAILED, error=str(e))
    return LedgerEntry(run.run_key, run.combo_index, run.seed, STATUS_OK,
                       final_metric=record.final_metric, wall_time=record.wall_time)


def rank_runs(
    combos: Sequence[Dict[str, Any]],
    entries: Sequence[LedgerEntry],
    metric: str,
    n_seeds: int,
) -> GridSummary:
    """Aggregate mean and population std per grid point and rank them."""
    by_combo: Dict[int, List[LedgerEntry]] = {i: [] for i in range(len(combos))}
    for entry in entries:
        by_combo[entry.combo_index].append(entry)

    rows = []
    for index, combo in enumerate(combos):
        runs = sorted(by_combo[index], key=lambda e: e.seed)
        values = [e.final_metric for e in runs if e.ok]
        n_failed = sum(1 for e in runs if not e.ok)
        rows.append(RankedConfig(
            rank=0,
            combo_index=index,
            params=dict(combo),
            mean=float(np.mean(values)) if values else None,
            std=float(np.std(values)) if values else None,
            n_runs=len(runs),
            n_failed=n_failed,
            failed=n_failed > 0 or not values,
            metrics=values,
        ))

    sign = -1.0 if metric == "accuracy" else 1.0
    healthy = sorted((r for r in rows if not r.failed), key=lambda r: (sign * r.mean, r.combo_index))
    failed = [r for r in rows if r.failed]
    ranking = healthy + failed
    for rank, row in enumerate(ranking, start=1):
        row.rank = rank

    means = [r.mean for r in healthy]
    return GridSummary(
        metric=metric,
        n_configs=len(combos),
        n_seeds=n_seeds,
        n_runs=sum(r.n_runs for r in rows),
        n_failed_runs=sum(r.n_failed for r in rows),
        across_mean=float(np.mean(means)) if means else None,
        across_std=float(np.std(means)) if means else None,
        ranking=ranking,
    )


def grid_search(
    spec: GridSpec,
    n_seeds: Optional[int] = None,
    out_dir: Optional[Path] = None,
    threads: Optional[int] = None,
    runner: Callable[[TrainConfig], RunRecord] = train,
) -> GridSummary:
    """Run the grid locally; with out_dir the ledger there makes the search resumable."""
    n_seeds = spec.n_seeds if n_seeds is None else n_seeds
    threads = threads if threads is not None else SettingsManager.from_env().threads
    runs = plan_runs(spec, n_seeds)
    ledger = RunLedger(Path(out_dir) / LEDGER_FILE if out_dir is not None else None)
    pending = [run for run in runs if run.run_key not in ledger]
    logger.info("grid_search_started", configs=spec.size, n_seeds=n_seeds, runs=len(runs),
                skipped=len(runs) - len(pending), threads=threads)

    def work(run: PlannedRun):
        ledger.append(execute_run(run, runner))

    if threads <= 1:
        for run in pending:
            work(run)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, pending))

    entries = []
    for run in runs:
        entry = ledger.get(run.run_key)
        if entry is not None:
            entries.append(replace(entry, combo_index=run.combo_index, seed=run.seed))
    summary = rank_runs(spec.combinations(), entries, metric_name(spec.base.task), n_seeds)
    logger.info("grid_search_finished", runs=summary.n_runs, failed=summary.n_failed_runs,
                across_mean=summary.across_mean)
    return summary
