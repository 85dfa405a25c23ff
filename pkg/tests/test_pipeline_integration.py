"""
Desk-scale runs of the whole pipeline: generate, train, sample, evaluate.

The model is trained once per module; every test here is slow.
"""

from __future__ import annotations

import numpy as np
import pytest

from laman_ric.chain import ChainConfig, run_chains
from laman_ric.corrupter import CorruptionConfig
from laman_ric.datagen import DatagenConfig, generate_dataset
from laman_ric.graph import Graph
from laman_ric.reconstructor import ModelHyper, ModelParams, TrainConfig, evaluate, train
from laman_ric.rigidity import is_laman
from laman_ric.stats import EvalConfig, eval_report

pytestmark = pytest.mark.slow

CORRUPTION = CorruptionConfig(mean_steps=5.0, size_max=16)
ONE_STEP = CorruptionConfig(mean_steps=1.0, size_max=16)


@pytest.fixture(scope="module")
def low_dod_graphs() -> list[Graph]:
    """Low-decomposability dataset sized so exact DoD stays tractable."""
    cfg = DatagenConfig(count=500, n_mean=12, n_std=2, n_cap=16, p_low=0.0, p_high=0.1)
    return [r.graph for r in generate_dataset(cfg, np.random.default_rng(11))]


@pytest.fixture(scope="module")
def trained(low_dod_graphs) -> ModelParams:
    cfg = TrainConfig(
        epochs=8,
        batch_size=32,
        step_size=4e-3,
        warmup_epochs=1,
        milestones=(6,),
        corruption=CORRUPTION,
        hyper=ModelHyper(hidden=32, rounds=3),
        seed=3,
    )
    return train(low_dod_graphs[:400], cfg)


class TestTrainedReconstruction:
    """Held-out behaviour of the trained reconstruction model."""

    def test_held_out_loss_below_uniform(self, trained, low_dod_graphs):
        report = evaluate(trained, low_dod_graphs[400:], CORRUPTION, np.random.default_rng(1))
        assert report.loss < report.uniform_loss

    def test_one_step_accuracy_beats_chance(self, trained, low_dod_graphs):
        report = evaluate(trained, low_dod_graphs[400:], ONE_STEP, np.random.default_rng(2))
        assert report.accuracy > report.chance_accuracy

    @pytest.mark.xfail(
        reason="reversing a deletion means picking one insertion among O(n^2) legal ones, "
        "which caps one-step top-1 accuracy below one half on this data",
        strict=False,
    )
    def test_one_step_accuracy_half(self, trained, low_dod_graphs):
        report = evaluate(trained, low_dod_graphs[400:], ONE_STEP, np.random.default_rng(2))
        assert report.accuracy >= 0.5


class TestSampledDistribution:
    """Chain samples against the reference set and the E-R baseline."""

    @pytest.fixture(scope="class")
    def samples(self, trained, low_dod_graphs) -> list[Graph]:
        cfg = ChainConfig(
            transitions=100,
            chains=10,
            corruption=CORRUPTION,
            max_reconstruction_steps=60,
            resample_transition_retries=10,
            seed=5,
        )
        return [r.reconstructed for r in run_chains(low_dod_graphs[:400], trained, cfg, jobs=2)]

    def test_every_sample_is_laman(self, samples):
        assert len(samples) == 1000
        assert all(is_laman(g) and 3 <= g.n <= 16 for g in samples)

    def test_dod_ks_beats_baseline(self, samples, low_dod_graphs):
        report = eval_report(samples, low_dod_graphs, EvalConfig(reps=200, seed=6))
        model_ks = report.sources["samples"].ks
        baseline_ks = report.sources["erdos_renyi"].ks
        assert model_ks is not None and baseline_ks is not None
        assert model_ks.statistic < baseline_ks.statistic
        assert model_ks.statistic <= 0.6
        assert report.sources["samples"].validity_pct == 100.0
