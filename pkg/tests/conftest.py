"""Shared pytest fixtures for laman_ric tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from laman_ric.corrupter import CorruptionConfig
from laman_ric.datagen import generate_laman
from laman_ric.formats import GraphRecord, write_graphs
from laman_ric.graph import Graph, complete_graph, from_edge_list
from laman_ric.reconstructor import ModelHyper, ModelParams


@pytest.fixture
def k3() -> Graph:
    return complete_graph(3)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def fan4() -> Graph:
    """Two triangles sharing edge (1, 2)."""
    return from_edge_list(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def path3() -> Graph:
    return from_edge_list(3, [(0, 1), (1, 2)])


@pytest.fixture
def laman_graph():
    """Factory fixture for random Laman graphs grown from K3."""
    def _factory(n: int = 8, p: float = 0.5, seed: int = 0) -> Graph:
        g, _ = generate_laman(n, p, np.random.default_rng(seed))
        return g
    return _factory


@pytest.fixture
def small_hyper() -> ModelHyper:
    return ModelHyper(hidden=6, rounds=2, fourier_freqs=(np.pi / 2, np.pi / 4))


@pytest.fixture
def model_params(small_hyper):
    """Factory fixture for small randomly initialised parameter sets."""
    def _factory(seed: int = 0, hyper: ModelHyper | None = None) -> ModelParams:
        return ModelParams.init(hyper or small_hyper, np.random.default_rng(seed))
    return _factory


@pytest.fixture
def corruption_config():
    """Factory fixture for CorruptionConfig instances."""
    def _factory(**kwargs) -> CorruptionConfig:
        return CorruptionConfig(**kwargs)
    return _factory


@pytest.fixture
def graph_file(tmp_path: Path):
    """Factory fixture writing graphs to a JSON Lines file under tmp_path."""
    def _factory(graphs: list[Graph], name: str = "graphs.jsonl") -> Path:
        path = tmp_path / name
        write_graphs(path, [GraphRecord(graph=g, id=f"g{i}") for i, g in enumerate(graphs)])
        return path
    return _factory


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep user config files and RIC_* variables out of every test."""
    monkeypatch.setattr("laman_ric.config.CONFIG_SEARCH_PATHS", [])
    monkeypatch.delenv("RIC_LOG", raising=False)
    monkeypatch.delenv("RIC_JOBS", raising=False)
