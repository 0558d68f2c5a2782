"""Minibatch training for the pendulum regression and the image classification tasks."""
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from config.train_config import (
    IdxDataConfig,
    LrSchedule,
    OptimizerKind,
    PendulumDataConfig,
    SyntheticDataConfig,
    TrainConfig,
)
from datasets.container import load_dataset
from datasets.csv_io import write_metrics_csv
from datasets.idx import load_idx_images
from datasets.pendulum import pendulum_dataset, pendulum_splits, simulate_pendulum
from datasets.synthetic import synthetic_rotated_patterns
from diffgraph import ops
from diffgraph.node import backward
from gconv.model import LieConvModel, build_model
from gconv.pretrain import pretrain_model_mappings
from interfaces.datasets import LabeledImageSet, PendulumParams, TimeSeriesSet
from interfaces.errors import ConfigError, DivergenceError, NonFiniteError
from interfaces.models import TaskType
from metrics.reports import REPORT_VERSION
from training.optimizers import SGD, Adam, Optimizer, linear_decay

logger = structlog.get_logger(__name__)

EVAL_BATCH = 256

Split = Union[TimeSeriesSet, LabeledImageSet]


@dataclass_json
@dataclass
class RunRecord:
    config: Dict[str, Any]
    fingerprint: str
    task: str
    metric: str
    seed: int
    per_epoch: List[Tuple[float, float]] = field(default_factory=list)
    final_metric: float = float("nan")
    initial_metric: float = float("nan")
    parameter_count: int = 0
    wall_time: Optional[float] = None
    report_version: int = REPORT_VERSION

    def public_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        """JSON payload; wall_time only when asked so reruns stay byte-identical."""
        payload = self.to_dict()
        if not include_timing:
            payload.pop("wall_time", None)
        return payload


@dataclass
class TaskData:
    """Train/test splits and an optional validation split for one task."""
    task: TaskType
    train: Split
    test: Split
    validation: Optional[Split] = None
    time_scale: float = 1.0

    @property
    def n_classes(self) -> int:
        return self.train.n_classes if isinstance(self.train, LabeledImageSet) else 0

    @property
    def image_size(self) -> Optional[int]:
        """Shorter image side, or None for the pendulum."""
        if isinstance(self.train, LabeledImageSet):
            return int(min(self.train.images.shape[1:3]))
        return None

    @property
    def image_channels(self) -> int:
        if isinstance(self.train, LabeledImageSet) and self.train.images.ndim == 4:
            return int(self.train.images.shape[-1])
        return 1


def _pendulum_data(data: PendulumDataConfig) -> TaskData:
    params = PendulumParams(m=data.m, L=data.L, g=data.g, lam=data.lam, theta0=data.theta0,
                            omega0=data.omega0, dt=data.dt, n_steps=data.n_steps)
    traj = simulate_pendulum(params)
    horizon = float(traj.t[-1])
    if data.validation:
        train, validation, test = pendulum_splits(traj)
        return TaskData(TaskType.PENDULUM, train, test, validation, time_scale=horizon)
    train, test = pendulum_dataset(traj, data.split)
    return TaskData(TaskType.PENDULUM, train, test, time_scale=horizon)


def _synthetic_data(data: SyntheticDataConfig) -> TaskData:
    if data.path:
        full = load_dataset(data.path)
    else:
        full = synthetic_rotated_patterns(data.n_per_class, data.classes, data.size, data.angle_law, data.seed)
    train, test = full.split(data.test_fraction, seed=data.seed)
    return TaskData(TaskType.CLASSIFY, train, test)


def _idx_data(data: IdxDataConfig) -> TaskData:
    full = load_idx_images(data.images_path, data.labels_path, data.n_classes, data.limit)
    if data.test_images_path and data.test_labels_path:
        test = load_idx_images(data.test_images_path, data.test_labels_path, data.n_classes, data.limit)
        return TaskData(TaskType.CLASSIFY, full, test)
    n_test = int(np.floor(data.test_fraction * len(full)))
    if n_test < 1 or n_test >= len(full):
        raise ConfigError(f"test fraction {data.test_fraction} leaves an empty split of {len(full)} images")
    cut = len(full) - n_test
    return TaskData(TaskType.CLASSIFY, full.subset(np.arange(cut)), full.subset(np.arange(cut, len(full))))


def prepare_data(config: TrainConfig) -> TaskData:
    """Build the splits described by config.data."""
    data = config.data
    if isinstance(data, PendulumDataConfig):
        return _pendulum_data(data)
    if isinstance(data, SyntheticDataConfig):
        return _synthetic_data(data)
    return _idx_data(data)


def _inputs(split: Split) -> np.ndarray:
    return split.t if isinstance(split, TimeSeriesSet) else split.images


def _targets(split: Split) -> np.ndarray:
    return split.xy if isinstance(split, TimeSeriesSet) else split.labels


def _make_optimizer(config: TrainConfig, model: LieConvModel) -> Optimizer:
    if config.optimizer is OptimizerKind.SGD:
        return SGD(model.parameters(), config.lr)
    return Adam(model.parameters(), config.lr)


def rmse(prediction: np.ndarray, target: np.ndarray) -> float:
    """Root of the mean squared entrywise error."""
    return float(np.sqrt(np.mean((prediction - target) ** 2)))


def accuracy(logits: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(logits, axis=1) == labels))


def predict_features(model: LieConvModel, features: np.ndarray) -> np.ndarray:
    chunks = [
        model.forward_features(features[start:start + EVAL_BATCH]).value
        for start in range(0, features.shape[0], EVAL_BATCH)
    ]
    return np.concatenate(chunks, axis=0)


def evaluate(model: LieConvModel, features: np.ndarray, targets: np.ndarray) -> float:
    """RMSE for regression, accuracy for classification."""
    outputs = predict_features(model, features)
    if model.task is TaskType.CLASSIFY:
        return accuracy(outputs, targets)
    return rmse(outputs, targets)


def _batch_loss(model: LieConvModel, features: np.ndarray, targets: np.ndarray):
    outputs = model.forward_features(features)
    if model.task is TaskType.CLASSIFY:
        return ops.softmax_cross_entropy(outputs, targets)
    return ops.mse_loss(outputs, targets)


def train_model(
    config: TrainConfig,
    data: Optional[TaskData] = None,
    metrics_csv: Optional[Path] = None,
) -> Tuple[RunRecord, LieConvModel]:
    """Train a freshly built model and return its run record with the trained model.

    Pendulum batches follow time order; classification batches follow a
    permutation drawn each epoch from a generator seeded with config.seed.
    """
    started = time.perf_counter()
    data = data if data is not None else prepare_data(config)
    if data.task is not config.task:
        raise ConfigError(f"data for task '{data.task.value}' given to a '{config.task.value}' run")
    if len(data.train) == 0 or len(data.test) == 0:
        raise ConfigError("training and test splits must be nonempty")

    arch = config.architecture(
        n_classes=max(data.n_classes, 2) if config.task is TaskType.CLASSIFY else None,
        image_channels=data.image_channels,
        time_scale=data.time_scale,
        image_size=data.image_size,
    )
    model = build_model(arch)
    if config.pretrain_mapping:
        pretrain_model_mappings(model)

    train_x = model.prepare(_inputs(data.train))
    train_y = _targets(data.train)
    test_x = model.prepare(_inputs(data.test))
    test_y = _targets(data.test)
    if data.validation is not None:
        val_x, val_y = model.prepare(_inputs(data.validation)), _targets(data.validation)
    else:
        val_x, val_y = test_x, test_y

    optimizer = _make_optimizer(config, model)
    rng = np.random.default_rng(config.seed)
    n = train_x.shape[0]
    steps_per_epoch = int(np.ceil(n / config.batch_size))
    total_steps = steps_per_epoch * config.epochs
    linear = config.schedule is LrSchedule.LINEAR

    record = RunRecord(
        config=config.model_dump(mode="json", by_alias=True),
        fingerprint=config.fingerprint(),
        task=config.task.value,
        metric="accuracy" if config.task is TaskType.CLASSIFY else "rmse",
        seed=config.seed,
        initial_metric=evaluate(model, test_x, test_y),
        parameter_count=model.parameter_count,
    )
    logger.info("run_started", fingerprint=record.fingerprint, task=record.task,
                parameters=record.parameter_count, train_size=n)

    step = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n) if config.task is TaskType.CLASSIFY else np.arange(n)
        losses = []
        try:
            for start in range(0, n, config.batch_size):
                batch = order[start:start + config.batch_size]
                optimizer.zero_grad()
                loss = _batch_loss(model, train_x[batch], train_y[batch])
                backward(loss)
                optimizer.step(linear_decay(config.lr, step, total_steps) if linear else config.lr)
                losses.append(float(loss.value))
                step += 1
            val_metric = evaluate(model, val_x, val_y)
        except NonFiniteError as e:
            raise DivergenceError(f"training diverged in epoch {epoch}: {e}", epoch=epoch) from e
        train_loss = float(np.mean(losses))
        if not np.isfinite(val_metric):
            raise DivergenceError(f"validation metric became {val_metric} in epoch {epoch}", epoch=epoch)
        record.per_epoch.append((train_loss, val_metric))
        logger.info("epoch_completed", epoch=epoch, train_loss=train_loss, val_metric=val_metric)

    record.final_metric = evaluate(model, test_x, test_y)
    record.wall_time = time.perf_counter() - started
    if metrics_csv is not None:
        write_metrics_csv(record.per_epoch, metrics_csv)
    logger.info("run_finished", fingerprint=record.fingerprint, metric=record.metric,
                final_metric=record.final_metric, wall_time=record.wall_time)
    return record, model


def train(config: TrainConfig, dataset: Optional[TaskData] = None) -> RunRecord:
    record, _ = train_model(config, dataset)
    return record
