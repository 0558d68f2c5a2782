"""Tests for training runs."""
import numpy as np
import pytest

from config.train_config import (
    AngleLaw,
    OptimizerKind,
    PendulumDataConfig,
    SamplingScheme,
    SyntheticDataConfig,
    TrainConfig,
)
from interfaces.errors import ConfigError, DivergenceError
from interfaces.models import TaskType
from lie.actions import ImageActionMethod
from training.trainer import prepare_data, train, train_model


def small_pendulum(**overrides) -> TrainConfig:
    fields = dict(
        task=TaskType.PENDULUM,
        hidden_channels=2,
        kernel_hidden=4,
        n_algebra_samples=2,
        epochs=2,
        batch_size=64,
        data=PendulumDataConfig(n_steps=200),
    )
    fields.update(overrides)
    return TrainConfig(**fields)


def small_classifier(**overrides) -> TrainConfig:
    fields = dict(
        task=TaskType.CLASSIFY,
        hidden_channels=2,
        kernel_hidden=4,
        n_algebra_samples=2,
        epochs=1,
        batch_size=8,
        data=SyntheticDataConfig(classes=2, n_per_class=8, size=8),
    )
    fields.update(overrides)
    return TrainConfig(**fields)


class TestPrepareData:
    """Test split construction from data configs."""

    def test_pendulum(self):
        """Test a 200-step trajectory splits 180/20 with the horizon as time scale."""
        data = prepare_data(small_pendulum())
        assert (len(data.train), len(data.test)) == (180, 20)
        assert data.time_scale == pytest.approx(2.0)

    def test_pendulum_validation(self):
        """Test the validation flag gives 80/10/10."""
        data = prepare_data(small_pendulum(data=PendulumDataConfig(n_steps=200, validation=True)))
        assert (len(data.train), len(data.validation), len(data.test)) == (160, 20, 20)

    def test_synthetic(self):
        """Test a 16-image set splits 13/3 with two classes."""
        data = prepare_data(small_classifier())
        assert (len(data.train), len(data.test)) == (13, 3)
        assert data.n_classes == 2


class TestTrainModel:
    """Test the training loop."""

    def test_zero_lr_keeps_metric(self):
        """Test lr = 0 leaves the test metric at its initial value."""
        record, _ = train_model(small_pendulum(lr=0.0))
        assert record.final_metric == record.initial_metric
        assert all(metric == record.initial_metric for _, metric in record.per_epoch)

    def test_deterministic(self):
        """Test two runs of one config give identical records without timing."""
        config = small_classifier(epochs=2)
        assert train(config).public_dict() == train(config).public_dict()

    def test_record_fields(self):
        """Test the record names its metric and counts epochs."""
        record = train(small_pendulum())
        assert record.metric == "rmse"
        assert len(record.per_epoch) == 2
        assert record.fingerprint == small_pendulum().fingerprint()
        assert "wall_time" not in record.public_dict()
        assert record.public_dict(include_timing=True)["wall_time"] >= 0.0

    def test_classifier_accuracy_range(self, tmp_path):
        """Test accuracy lies in [0, 1] and the metrics CSV has one row per epoch."""
        path = tmp_path / "metrics.csv"
        record, _ = train_model(small_classifier(epochs=2), metrics_csv=path)
        assert record.metric == "accuracy"
        assert 0.0 <= record.final_metric <= 1.0
        lines = path.read_text().splitlines()
        assert lines[0] == "epoch,train_loss,val_metric"
        assert len(lines) == 3

    def test_architecture_follows_data(self):
        """Test the pendulum model has no class count and the classifier kernel spans the image."""
        _, pendulum = train_model(small_pendulum(epochs=1))
        assert pendulum.arch.n_classes is None
        _, classifier = train_model(small_classifier())
        assert (classifier.arch.n_classes, classifier.arch.kernel_size) == (2, 8)
        assert len(classifier.samples) == 2

    def test_divergence(self):
        """Test a huge SGD step is reported as divergence with its epoch."""
        config = small_pendulum(optimizer=OptimizerKind.SGD, lr=1e12, strict_mode=True, epochs=10)
        with pytest.raises(DivergenceError) as info:
            train(config)
        assert info.value.epoch is not None

    def test_task_mismatch(self):
        """Test pendulum data given to a classification run raises."""
        data = prepare_data(small_pendulum())
        with pytest.raises(ConfigError):
            train(small_classifier(), data)


@pytest.mark.slow
class TestAcceptance:
    """Test full-size runs reach their published quality."""

    def test_pendulum_rmse(self):
        """Test the default pendulum run reaches test RMSE below 0.1."""
        record = train(TrainConfig(task=TaskType.PENDULUM, lr=1e-3, epochs=30))
        assert record.final_metric < 0.1

    def test_strict_c4_accuracy(self):
        """Test a strict quarter-turn model reaches 95% on c4-rotated glyphs within 50 epochs."""
        config = TrainConfig(
            task=TaskType.CLASSIFY,
            sampling=SamplingScheme.C4,
            lifting_method=ImageActionMethod.EXACT_C4,
            strict_mode=True,
            lr=1e-2,
            epochs=50,
            data=SyntheticDataConfig(angle_law=AngleLaw.C4),
        )
        record = train(config)
        assert record.final_metric >= 0.95

    def test_uniform_angle_accuracy(self):
        """Test the default classifier reaches 85% on uniformly rotated 16x16 glyphs within 100 epochs."""
        config = TrainConfig(
            task=TaskType.CLASSIFY,
            lr=1e-2,
            epochs=100,
            data=SyntheticDataConfig(angle_law=AngleLaw.UNIFORM),
        )
        record = train(config)
        assert record.final_metric >= 0.85
        assert np.isfinite(record.initial_metric)
