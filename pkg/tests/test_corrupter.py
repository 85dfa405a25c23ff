"""Unit tests for the corruption distribution."""

from __future__ import annotations

import numpy as np
import pytest

from laman_ric.corrupter import (
    CorruptionConfig,
    corrupt,
    corruption_step,
    require_within_bounds,
    sample_length,
)
from laman_ric.errors import ConfigError, NotLaman
from laman_ric.moves import apply
from laman_ric.rigidity import is_laman


class TestCorruptionConfig:
    """Tests for CorruptionConfig validation."""

    def test_defaults(self):
        cfg = CorruptionConfig()
        assert (cfg.mean_steps, cfg.size_min, cfg.size_max) == (5.0, 3, 100)

    @pytest.mark.parametrize(
        "kwargs",
        [{"mean_steps": 0.5}, {"size_min": 2}, {"size_min": 10, "size_max": 10}],
    )
    def test_invalid(self, corruption_config, kwargs):
        with pytest.raises(ConfigError):
            corruption_config(**kwargs)

    def test_from_dict_round_trip(self, corruption_config):
        cfg = corruption_config(mean_steps=3.0, size_max=40)
        assert CorruptionConfig.from_dict(cfg.to_dict()) == cfg


class TestSampleLength:
    """Tests for the geometric length law."""

    def test_mean_one_is_always_one(self):
        rng = np.random.default_rng(0)
        assert {sample_length(rng, 1.0) for _ in range(1000)} == {1}

    def test_mean_and_first_mass(self):
        rng = np.random.default_rng(1)
        draws = np.array([sample_length(rng, 5.0) for _ in range(100_000)])
        assert draws.min() >= 1
        assert abs(draws.mean() - 5.0) <= 0.1
        assert abs(np.mean(draws == 1) - 0.2) <= 0.01

    def test_rejects_mean_below_one(self):
        with pytest.raises(ConfigError):
            sample_length(np.random.default_rng(0), 0.9)


class TestCorrupt:
    """Tests for corrupt and corruption_step."""

    def test_triangle_first_step_kinds(self, k3, corruption_config):
        """Test both insertion kinds are equally likely from K3 when deletes are masked."""
        cfg = corruption_config()
        rng = np.random.default_rng(2)
        kinds = [corruption_step(k3, cfg, rng)[1].kind for _ in range(20_000)]
        share = kinds.count("I") / len(kinds)
        assert set(kinds) == {"I", "II"}
        assert abs(share - 0.5) <= 0.02

    def test_states_are_laman_and_replay(self, laman_graph, corruption_config):
        cfg = corruption_config(mean_steps=4.0)
        rng = np.random.default_rng(3)
        for seed in range(20):
            x = laman_graph(int(rng.integers(3, 12)), seed=seed)
            trace = corrupt(x, cfg, rng)
            assert trace.k >= 1
            assert len(trace.states) == trace.k
            state = trace.start
            for (move, _), expected in zip(trace.steps, trace.states):
                state, _ = apply(state, move)
                assert state == expected
                assert is_laman(state)
            assert trace.end == state

    def test_mean_one_gives_single_step(self, k3, corruption_config):
        trace = corrupt(k3, corruption_config(mean_steps=1.0), np.random.default_rng(4))
        assert trace.k == 1

    def test_size_bounds_respected(self, k3, corruption_config):
        cfg = corruption_config(mean_steps=20.0, size_max=6)
        trace = corrupt(k3, cfg, np.random.default_rng(5))
        assert all(3 <= s.n <= 6 for s in trace.states)

    def test_deterministic(self, laman_graph, corruption_config):
        x = laman_graph(10, seed=1)
        a = corrupt(x, corruption_config(), np.random.default_rng(9))
        b = corrupt(x, corruption_config(), np.random.default_rng(9))
        assert a.to_dict() == b.to_dict()

    def test_not_laman(self, path3, corruption_config):
        with pytest.raises(NotLaman):
            corrupt(path3, corruption_config(), np.random.default_rng(0))

    def test_below_size_min(self, k3, corruption_config):
        with pytest.raises(ConfigError):
            corrupt(k3, corruption_config(size_min=4), np.random.default_rng(0))

    def test_above_size_max(self, laman_graph, corruption_config):
        """Test a start graph above size_max is rejected rather than shrunk by deletions."""
        with pytest.raises(ConfigError, match="outside"):
            corrupt(laman_graph(12, seed=0), corruption_config(size_max=10),
                    np.random.default_rng(0))

    def test_at_size_max_stays_in_bounds(self, laman_graph, corruption_config):
        cfg = corruption_config(mean_steps=10.0, size_max=10)
        trace = corrupt(laman_graph(10, seed=1), cfg, np.random.default_rng(2))
        assert all(3 <= s.n <= 10 for s in trace.states)

    def test_to_dict(self, k3, corruption_config):
        trace = corrupt(k3, corruption_config(mean_steps=2.0), np.random.default_rng(6))
        data = trace.to_dict()
        assert data["k"] == trace.k == len(data["steps"]) == len(data["states"])
        assert data["start"] == {"nodes": [0, 1, 2], "edges": [[0, 1], [0, 2], [1, 2]]}
        assert data["end"]["n"] == trace.end.n
        assert data["config"]["mean_steps"] == 2.0


class TestRequireWithinBounds:
    """Tests for the shared size-bound check."""

    def test_in_bounds(self, k3, laman_graph, corruption_config):
        require_within_bounds([k3, laman_graph(10)], corruption_config(size_max=10))

    def test_names_first_offender(self, k3, laman_graph, corruption_config):
        graphs = [k3, laman_graph(12, seed=0), laman_graph(13, seed=1)]
        with pytest.raises(ConfigError, match="Seed graph 1 has 12 nodes"):
            require_within_bounds(graphs, corruption_config(size_max=10), "Seed graph")
