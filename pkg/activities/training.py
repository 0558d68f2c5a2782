"""Training activities for durable grid search."""
import asyncio
from typing import Any, Dict

import structlog
from pydantic import ValidationError
from temporalio import activity

from config.train_config import TrainConfig
from training.grid_search import PlannedRun, execute_run
from training.trainer import train

logger = structlog.get_logger(__name__)


@activity.defn
async def RunTrainingSeed(run: Dict[str, Any]) -> Dict[str, Any]:
    """Train one (grid point, seed) run.

    `run` holds run_key, combo_index and config (a TrainConfig payload whose
    seed is already set). The result is a ledger entry plus a success flag.
    """
    try:
        config = TrainConfig.model_validate(run["config"])
        planned = PlannedRun(run["run_key"], int(run["combo_index"]), config.seed, config)
        entry = await asyncio.to_thread(execute_run, planned, train)
        return {"success": entry.ok, **entry.to_dict()}
    except (ValidationError, KeyError, ValueError) as e:
        logger.error("training_activity_rejected", run_key=run.get("run_key"), error=str(e))
        return {
            "success": False,
            "error": str(e),
            "run_key": run.get("run_key", ""),
            "combo_index": int(run.get("combo_index", -1)),
            "seed": -1,
            "status": "failed",
        }
