"""CSV writers for trajectories and per-epoch metrics."""
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from interfaces.datasets import TimeSeriesSet, Trajectory
from interfaces.errors import FormatError

TRAJECTORY_HEADER = "t,x,y"
METRICS_HEADER = "epoch,train_loss,val_metric"


def _g(value: float) -> str:
    return "%.17g" % value


def trajectory_csv(traj: Trajectory) -> str:
    rows = [TRAJECTORY_HEADER]
    rows += [f"{_g(t)},{_g(x)},{_g(y)}" for t, (x, y) in zip(traj.t, traj.xy)]
    return "\n".join(rows) + "\n"


def write_trajectory_csv(traj: Trajectory, path) -> None:
    Path(path).write_text(trajectory_csv(traj), encoding="utf-8")


def read_trajectory_csv(path) -> TimeSeriesSet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != TRAJECTORY_HEADER:
        raise FormatError(f"{path}: expected header '{TRAJECTORY_HEADER}'")
    try:
        values = np.array([[float(v) for v in line.split(",")] for line in lines[1:] if line.strip()])
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e
    values = values.reshape(-1, 3)
    return TimeSeriesSet(t=values[:, 0], xy=values[:, 1:])


def write_metrics_csv(per_epoch: Sequence[Tuple[float, float]], path) -> None:
    rows = [METRICS_HEADER]
    rows += [f"{epoch},{_g(loss)},{_g(metric)}" for epoch, (loss, metric) in enumerate(per_epoch, start=1)]
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")
