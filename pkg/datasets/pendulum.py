"""Damped linear pendulum trajectories integrated with classical RK4."""
from typing import Optional, Tuple

import numpy as np
import structlog

from interfaces.datasets import PendulumParams, TimeSeriesSet, Trajectory
from interfaces.errors import ConfigError

logger = structlog.get_logger(__name__)

VALIDATION_FRACTIONS = (0.8, 0.1)


def _derivative(state: np.ndarray, params: PendulumParams) -> np.ndarray:
    theta, omega = state
    return np.array([omega, -(params.lam / params.m) * omega - (params.g / params.L) * theta])


def rk4_step(state: np.ndarray, params: PendulumParams) -> np.ndarray:
    dt = params.dt
    k1 = _derivative(state, params)
    k2 = _derivative(state + 0.5 * dt * k1, params)
    k3 = _derivative(state + 0.5 * dt * k2, params)
    k4 = _derivative(state + dt * k3, params)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def simulate_pendulum(params: Optional[PendulumParams] = None) -> Trajectory:
    """Sample the state at dt, 2dt, ..., n_steps·dt from (theta0, omega0) at t = 0."""
    params = params or PendulumParams()
    states = np.empty((params.n_steps, 2))
    state = np.array([params.theta0, params.omega0], dtype=np.float64)
    for i in range(params.n_steps):
        state = rk4_step(state, params)
        states[i] = state
    t = params.dt * np.arange(1, params.n_steps + 1)
    theta, omega = states[:, 0], states[:, 1]
    xy = np.stack([params.L * np.sin(theta), -params.L * np.cos(theta)], axis=1)
    logger.debug("pendulum_simulated", n_steps=params.n_steps, dt=params.dt, lam=params.lam)
    return Trajectory(t=t, theta=theta, omega=omega, xy=xy)


def linear_energy(traj: Trajectory, params: PendulumParams) -> np.ndarray:
    """½ω² + ½(g/L)θ², conserved by the undamped linear system."""
    return 0.5 * traj.omega ** 2 + 0.5 * (params.g / params.L) * traj.theta ** 2


def energy_drift(traj: Trajectory, params: PendulumParams) -> float:
    """Relative energy change over the run, meaningful when lam = 0."""
    energy = linear_energy(traj, params)
    initial = 0.5 * params.omega0 ** 2 + 0.5 * (params.g / params.L) * params.theta0 ** 2
    if initial == 0.0:
        return float(np.max(np.abs(energy)))
    return float(np.max(np.abs(energy - initial)) / initial)


def zero_crossing_period(traj: Trajectory) -> float:
    """Mean period from interpolated upward zero crossings of θ."""
    theta, t = traj.theta, traj.t
    idx = np.nonzero((theta[:-1] < 0.0) & (theta[1:] >= 0.0))[0]
    if idx.size < 2:
        raise ConfigError("trajectory has fewer than two upward zero crossings")
    crossings = t[idx] - theta[idx] * (t[idx + 1] - t[idx]) / (theta[idx + 1] - theta[idx])
    return float(np.mean(np.diff(crossings)))


def _series(traj: Trajectory, start: int, stop: int) -> TimeSeriesSet:
    return TimeSeriesSet(t=traj.t[start:stop].copy(), xy=traj.xy[start:stop].copy())


def pendulum_dataset(traj: Trajectory, split: float = 0.9) -> Tuple[TimeSeriesSet, TimeSeriesSet]:
    """Chronological (train, test): the first ⌊split·n⌋ samples train."""
    n = len(traj)
    n_train = int(np.floor(split * n))
    if not 0.0 < split < 1.0 or n_train < 1 or n_train >= n:
        raise ConfigError(f"split {split} of {n} samples leaves an empty partition")
    return _series(traj, 0, n_train), _series(traj, n_train, n)


def pendulum_splits(traj: Trajectory) -> Tuple[TimeSeriesSet, TimeSeriesSet, TimeSeriesSet]:
    """Chronological 80/10/10 (train, validation, test)."""
    n = len(traj)
    n_train = int(np.floor(VALIDATION_FRACTIONS[0] * n))
    n_val = int(np.floor(VALIDATION_FRACTIONS[1] * n))
    if n_train < 1 or n_val < 1 or n_train + n_val >= n:
        raise ConfigError(f"{n} samples are too few for a train/validation/test split")
    return (
        _series(traj, 0, n_train),
        _series(traj, n_train, n_train + n_val),
        _series(traj, n_train + n_val, n),
    )
