"""Grid search workflow fanning out one activity per training run."""
import asyncio
from datetime import timedelta
from typing import Any, Dict, List

from temporalio import workflow
from temporalio.common import RetryPolicy

with workflow.unsafe.imports_passed_through():
    from training.grid_search import rank_runs
    from training.ledger import STATUS_FAILED, LedgerEntry


@workflow.defn
class GridSearchWorkflow:
    """Train every planned run and rank the grid points."""

    def __init__(self):
        self.completed = 0
        self.failed = 0
        self.total = 0

    @workflow.run
    async def run(self, request: Dict[str, Any]) -> Dict[str, Any]:
        """Run a planned grid.

        Args:
            request: combos (grid points in order), runs (run_key, combo_index,
                config), metric and n_seeds, as built by the CLI

        Returns:
            Dict with the success flag and the ranked summary
        """
        runs: List[Dict[str, Any]] = request["runs"]
        self.total = len(runs)
        workflow.logger.info(f"Starting grid search with {self.total} runs")

        results = await asyncio.gather(*[self._run_one(run) for run in runs])

        entries = []
        for run, result in zip(runs, results):
            entry = LedgerEntry.from_dict({k: v for k, v in result.items() if k != "success"})
            entry.combo_index = int(run["combo_index"])
            entries.append(entry)
        summary = rank_runs(request["combos"], entries, request["metric"], int(request["n_seeds"]))

        workflow.logger.info(
            f"Grid search finished: {self.completed} runs, {self.failed} failed"
        )
        return {"success": True, "summary": summary.to_dict()}

    async def _run_one(self, run: Dict[str, Any]) -> Dict[str, Any]:
        try:
            result = await workflow.execute_activity(
                "RunTrainingSeed",
                run,
                start_to_close_timeout=timedelta(hours=2),
                retry_policy=RetryPolicy(
                    initial_interval=timedelta(seconds=1),
                    maximum_interval=timedelta(seconds=10),
                    maximum_attempts=2
                )
            )
        except Exception as e:
            workflow.logger.error(f"Run {run['run_key']} failed: {str(e)}")
            result = {
                "success": False,
                "error": str(e),
                "run_key": run["run_key"],
                "combo_index": run["combo_index"],
                "seed": run["config"].get("seed", -1),
                "status": STATUS_FAILED,
            }
        self.completed += 1
        if not result.get("success", False):
            self.failed += 1
        return result

    @workflow.query
    def get_progress(self) -> Dict[str, Any]:
        """Query run counts so far."""
        return {
            "total_runs": self.total,
            "completed_runs": self.completed,
            "failed_runs": self.failed,
        }
