import asyncio

import structlog
from temporalio.client import Client
from temporalio.worker import Worker

from activities.training import RunTrainingSeed
from config.logging_config import configure_logging
from config.queues import TRAINING_QUEUE
from config.settings import SettingsManager
from workflows.grid_search import GridSearchWorkflow

logger = structlog.get_logger(__name__)


async def main():
    settings = SettingsManager.from_env()
    configure_logging(settings.log_level, settings.log_format)

    client = await Client.connect(settings.temporal_address)

    worker = Worker(
        client,
        task_queue=TRAINING_QUEUE,
        workflows=[GridSearchWorkflow],
        activities=[RunTrainingSeed],
        max_concurrent_activities=settings.threads,
    )

    logger.info("worker_starting", queue=TRAINING_QUEUE, threads=settings.threads,
                temporal_address=settings.temporal_address)
    await worker.run()


if __name__ == "__main__":
    asyncio.run(main())
