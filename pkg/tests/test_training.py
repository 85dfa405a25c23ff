"""Unit tests for the optimiser, schedule and training loop."""

from __future__ import annotations

import numpy as np
import pytest

from laman_ric.corrupter import CorruptionConfig
from laman_ric.errors import ConfigError, EmptySample
from laman_ric.reconstructor import (
    Adamax,
    EpochLog,
    ModelHyper,
    StepSchedule,
    TrainConfig,
    evaluate,
    train,
    write_training_log,
)


@pytest.fixture
def tiny_dataset(laman_graph):
    return [laman_graph(5 + i % 3, p=0.3, seed=i) for i in range(24)]


@pytest.fixture
def train_config(small_hyper):
    """Factory fixture for quick training configurations."""
    def _factory(**kwargs) -> TrainConfig:
        defaults = {
            "epochs": 6,
            "batch_size": 8,
            "step_size": 1e-2,
            "warmup_epochs": 1,
            "milestones": (),
            "corruption": CorruptionConfig(mean_steps=2.0, size_max=12),
            "hyper": small_hyper,
        }
        defaults.update(kwargs)
        return TrainConfig(**defaults)
    return _factory


class TestTrainConfig:
    """Tests for TrainConfig validation."""

    def test_milestone_beyond_epochs(self, train_config):
        with pytest.raises(ConfigError):
            train_config(epochs=10, milestones=(12,))

    @pytest.mark.parametrize("kwargs", [{"epochs": 0}, {"batch_size": 0}, {"step_size": 0.0}])
    def test_invalid(self, train_config, kwargs):
        with pytest.raises(ConfigError):
            train_config(**kwargs)

    def test_scaled_step_size(self, train_config):
        cfg = train_config(step_size=2e-3, batch_size=256, scale_step_size=True)
        assert cfg.effective_step_size == pytest.approx(4e-3)
        assert train_config(step_size=2e-3).effective_step_size == 2e-3

    def test_to_dict(self, train_config):
        data = train_config().to_dict()
        assert data["hyper"]["hidden"] == 6
        assert data["corruption"]["mean_steps"] == 2.0


class TestStepSchedule:
    """Tests for warm-up and decay."""

    def test_warmup_then_decay(self):
        schedule = StepSchedule(base=1.0, steps_per_epoch=2, warmup_epochs=1, milestones=(2, 3))
        assert [schedule(s) for s in range(4)] == pytest.approx([0.5, 1.0, 1.0, 1.0])
        assert schedule(4) == pytest.approx(0.1)
        assert schedule(6) == pytest.approx(0.01)

    def test_no_warmup(self):
        schedule = StepSchedule(base=0.5, steps_per_epoch=3, warmup_epochs=0, milestones=())
        assert schedule(0) == 0.5


class TestAdamax:
    """Tests for the Adamax update."""

    def test_first_step_moves_by_step_size(self, model_params):
        params = model_params()
        before = params.copy()
        grads = {name: np.full_like(arr, 2.0) for name, arr in params.arrays.items()}
        Adamax().step(params, grads, 0.01)
        for name in params:
            np.testing.assert_allclose(before[name] - params[name], 0.01, rtol=1e-6)

    def test_zero_gradient_keeps_params(self, model_params):
        params = model_params()
        before = params.copy()
        Adamax().step(params, params.zeros_like(), 0.01)
        for name in params:
            np.testing.assert_array_equal(params[name], before[name])


class TestTrain:
    """Tests for the training loop."""

    def test_deterministic(self, tiny_dataset, train_config):
        cfg = train_config(epochs=2, seed=3)
        a = train(tiny_dataset[:6], cfg)
        b = train(tiny_dataset[:6], cfg)
        for name in a:
            np.testing.assert_array_equal(a[name], b[name])

    def test_jobs_do_not_change_result(self, tiny_dataset, train_config):
        cfg = train_config(epochs=1, seed=4)
        serial = train(tiny_dataset[:6], cfg, jobs=1)
        threaded = train(tiny_dataset[:6], cfg, jobs=3)
        for name in serial:
            np.testing.assert_array_equal(serial[name], threaded[name])

    def test_loss_decreases(self, tiny_dataset, train_config):
        log: list[EpochLog] = []
        cfg = train_config(
            epochs=10, step_size=5e-2, seed=5, corruption=CorruptionConfig(mean_steps=1.0)
        )
        train(tiny_dataset, cfg, log=log)
        assert [row.epoch for row in log] == list(range(1, 11))
        assert log[-1].loss < log[0].loss

    def test_empty_dataset(self, train_config):
        with pytest.raises(EmptySample):
            train([], train_config())

    def test_graph_above_size_max(self, tiny_dataset, laman_graph, train_config):
        """Test oversized graphs are rejected up front instead of failing mid-epoch."""
        data = [*tiny_dataset, laman_graph(14, seed=3)]
        with pytest.raises(ConfigError, match="Training graph 24 has 14 nodes"):
            train(data, train_config())

    def test_write_log(self, tmp_path):
        path = tmp_path / "log.csv"
        write_training_log(path, [EpochLog(1, 2.5, 0.001), EpochLog(2, 2.0, 0.002)])
        assert path.read_text(encoding="utf-8") == (
            "epoch,loss,step_size\n1,2.5,0.001\n2,2.0,0.002\n"
        )


class TestEvaluate:
    """Tests for held-out evaluation."""

    def test_fields(self, tiny_dataset, model_params):
        report = evaluate(
            model_params(), tiny_dataset[:5], CorruptionConfig(mean_steps=2.0),
            np.random.default_rng(0),
        )
        assert report.count == 5
        assert 0.0 <= report.accuracy <= 1.0
        assert 0.0 < report.chance_accuracy < 1.0
        assert report.loss > 0 and report.uniform_loss > 0
        assert set(report.to_dict()) == {
            "loss", "uniform_loss", "top1_accuracy", "chance_accuracy", "count"
        }

    def test_empty(self, model_params):
        with pytest.raises(EmptySample):
            evaluate(model_params(), [], CorruptionConfig(), np.random.default_rng(0))

    def test_graph_above_size_max(self, laman_graph, model_params):
        with pytest.raises(ConfigError):
            evaluate(
                model_params(), [laman_graph(12, seed=0)],
                CorruptionConfig(mean_steps=1.0, size_max=10), np.random.default_rng(0),
            )

    @pytest.mark.slow
    def test_trained_beats_uniform(self, laman_graph):
        """Test a briefly trained model beats the uniform baseline on held-out traces."""
        graphs = [laman_graph(8 + i % 5, p=0.05, seed=i) for i in range(260)]
        cfg = TrainConfig(
            epochs=10,
            batch_size=32,
            milestones=(8,),
            warmup_epochs=1,
            step_size=5e-3,
            corruption=CorruptionConfig(mean_steps=5.0, size_max=20),
            hyper=ModelHyper(hidden=16, rounds=3),
        )
        params = train(graphs[:200], cfg)
        report = evaluate(
            params, graphs[200:], CorruptionConfig(mean_steps=1.0, size_max=20),
            np.random.default_rng(1),
        )
        assert report.loss < report.uniform_loss
        assert report.accuracy > report.chance_accuracy
