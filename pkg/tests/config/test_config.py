"""Tests for run configs and runtime settings."""
import os
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from config.settings import SettingsManager
from config.train_config import (
    ArchitectureConfig,
    LrSchedule,
    PendulumDataConfig,
    SamplingScheme,
    SyntheticDataConfig,
    TrainConfig,
)
from interfaces.errors import ConfigError
from interfaces.models import Activation, TaskType


class TestTrainConfig:
    """Test the run config schema."""

    def test_unknown_key(self):
        """Test unknown keys are rejected."""
        with pytest.raises(ValidationError):
            TrainConfig.model_validate({"lr": 0.1, "learning_rate": 0.1})

    def test_nested_unknown_key(self):
        """Test unknown keys inside the data block are rejected."""
        with pytest.raises(ValidationError):
            TrainConfig.model_validate({"data": {"kind": "pendulum", "mass": 2.0}})

    def test_default_data_follows_task(self):
        """Test a missing data block defaults to the task's data."""
        assert isinstance(TrainConfig().data, PendulumDataConfig)
        assert isinstance(TrainConfig(task=TaskType.CLASSIFY).data, SyntheticDataConfig)

    def test_data_must_fit_task(self):
        """Test pendulum data in a classification config is rejected."""
        with pytest.raises(ValidationError):
            TrainConfig(task=TaskType.CLASSIFY, data=PendulumDataConfig())

    def test_lambda_alias(self):
        """Test the damping coefficient is read from the 'lambda' key."""
        config = TrainConfig.model_validate({"data": {"kind": "pendulum", "lambda": 0.0}})
        assert config.data.lam == 0.0
        assert '"lambda": 0.0' in config.canonical_json()

    def test_schedule_defaults(self):
        """Test linear decay for classification and constant for the pendulum."""
        assert TrainConfig().schedule is LrSchedule.CONSTANT
        assert TrainConfig(task=TaskType.CLASSIFY).schedule is LrSchedule.LINEAR
        assert TrainConfig(lr_schedule=LrSchedule.LINEAR).schedule is LrSchedule.LINEAR

    def test_fingerprint(self):
        """Test equal configs share a fingerprint and any change alters it."""
        assert TrainConfig(lr=0.1).fingerprint() == TrainConfig(lr=0.1).fingerprint()
        assert TrainConfig(lr=0.1).fingerprint() != TrainConfig(lr=0.1, seed=1).fingerprint()

    def test_from_json_file(self, tmp_path):
        """Test a config file round-trips through its canonical JSON."""
        path = tmp_path / "run.json"
        config = TrainConfig(task=TaskType.CLASSIFY, hidden_channels=8, epochs=3)
        path.write_text(config.canonical_json(), encoding="utf-8")
        assert TrainConfig.from_json_file(path) == config

    def test_negative_lr(self):
        """Test a negative learning rate is rejected."""
        with pytest.raises(ValidationError):
            TrainConfig(lr=-0.1)

    def test_architecture(self):
        """Test the derived architecture carries task-specific sizes."""
        arch = TrainConfig(task=TaskType.CLASSIFY, kernel_size=5).architecture(n_classes=7, image_channels=3)
        assert arch.output_dim == 7
        assert (arch.kernel_size, arch.image_channels) == (5, 3)
        assert ArchitectureConfig().output_dim == 2

    def test_classify_defaults(self):
        """Test classification runs pick up the rotation-grid defaults unless set explicitly."""
        config = TrainConfig(task=TaskType.CLASSIFY)
        assert (config.lr, config.sampling, config.n_algebra_samples) == (1e-2, SamplingScheme.GRID, 16)
        assert config.mapping_activation is Activation.IDENTITY
        explicit = TrainConfig.model_validate({"task": "classify", "lr": 1e-3, "sampling": "uniform"})
        assert (explicit.lr, explicit.sampling) == (1e-3, SamplingScheme.UNIFORM)
        assert TrainConfig().sampling is SamplingScheme.UNIFORM
        assert TrainConfig().mapping_activation is Activation.SIGMOID

    def test_kernel_spans_image_by_default(self):
        """Test a missing kernel_size takes the image side and the pendulum has no classes."""
        assert TrainConfig(task=TaskType.CLASSIFY).architecture(n_classes=4, image_size=16).kernel_size == 16
        assert TrainConfig(task=TaskType.CLASSIFY, kernel_size=3).architecture(4, image_size=16).kernel_size == 3
        assert TrainConfig().architecture().n_classes is None


class TestSettingsManager:
    """Test environment-driven runtime settings."""

    def test_defaults(self):
        """Test unset variables give the defaults."""
        with patch.dict(os.environ, {}, clear=True):
            settings = SettingsManager.from_env(load_env_file=False)
        assert settings == SettingsManager.defaults()

    def test_reads_environment(self):
        """Test every variable is honored."""
        env = {
            "LACONV_THREADS": "4",
            "LACONV_LOG_LEVEL": "debug",
            "LACONV_LOG_FORMAT": "JSON",
            "TEMPORAL_ADDRESS": "temporal:7233",
        }
        with patch.dict(os.environ, env, clear=True):
            settings = SettingsManager.from_env(load_env_file=False)
        assert settings.threads == 4
        assert settings.log_level == "DEBUG"
        assert settings.log_format == "json"
        assert settings.temporal_address == "temporal:7233"

    @pytest.mark.parametrize("env", [
        {"LACONV_THREADS": "many"},
        {"LACONV_THREADS": "0"},
        {"LACONV_LOG_FORMAT": "xml"},
    ])
    def test_invalid(self, env):
        """Test malformed values raise config errors."""
        with patch.dict(os.environ, env, clear=True):
            with pytest.raises(ConfigError):
                SettingsManager.from_env(load_env_file=False)
