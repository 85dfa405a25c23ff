"""Synthetic Laman datasets grown from K3 by random Henneberg moves."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ConfigError
from .formats import GraphRecord
from .graph import Graph, complete_graph
from .moves import InsertI, InsertII, Move, apply
from .workers import map_ordered

logger = logging.getLogger(__name__)

# (p_low, p_high) ranges for the probability of a type-I move
PRESETS: dict[str, tuple[float, float]] = {
    "low": (0.0, 0.1),
    "high": (0.9, 1.0),
}


@dataclass(frozen=True)
class DatagenConfig:
    """
    Dataset generation parameters.

    Node counts are round(Normal(n_mean, n_std)) clamped to [n_floor, n_cap];
    each graph draws its type-I probability from U(p_low, p_high).
    """
    count: int
    n_mean: float = 30.0
    n_std: float = 5.0
    p_low: float = 0.0
    p_high: float = 0.1
    n_floor: int = 3
    n_cap: int | None = None
    record_moves: bool = False

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ConfigError(f"count must be non-negative, got {self.count}")
        if not 0.0 <= self.p_low <= self.p_high <= 1.0:
            raise ConfigError(
                f"Need 0 <= p_low <= p_high <= 1, got [{self.p_low}, {self.p_high}]"
            )
        if self.n_floor < 3:
            raise ConfigError(f"n_floor must be >= 3, got {self.n_floor}")
        if self.n_cap is not None and self.n_cap < self.n_floor:
            raise ConfigError(f"n_cap ({self.n_cap}) is below n_floor ({self.n_floor})")
        if self.n_std < 0:
            raise ConfigError(f"n_std must be non-negative, got {self.n_std}")

    @classmethod
    def from_preset(cls, preset: str, count: int, **overrides: Any) -> DatagenConfig:
        try:
            p_low, p_high = PRESETS[preset]
        except KeyError:
            raise ConfigError(
                f"Unknown preset {preset!r}; choose from {sorted(PRESETS)}"
            ) from None
        return cls(count=count, **{"p_low": p_low, "p_high": p_high, **overrides})


def generate_laman(n: int, p: float, rng: np.random.Generator) -> tuple[Graph, list[Move]]:
    """
    Grow a Laman graph on n nodes from K3.

    Each step applies a uniform type-I move with probability p, otherwise a
    uniform type-II move (uniform edge, then uniform third node). Returns the
    graph and the applied moves, which replay exactly from K3.
    """
    if n < 3:
        raise ConfigError(f"Generated graphs need at least 3 nodes, got {n}")
    g = complete_graph(3)
    moves: list[Move] = []
    for _ in range(3, n):
        nodes = g.nodes
        move: Move
        if rng.random() < p:
            i, j = rng.choice(len(nodes), size=2, replace=False)
            move = InsertI(nodes[int(i)], nodes[int(j)])
        else:
            edges = g.edges
            u, v = edges[int(rng.integers(len(edges)))]
            others = [w for w in nodes if w != u and w != v]
            move = InsertII(u, v, others[int(rng.integers(len(others)))])
        g, _ = apply(g, move)
        moves.append(move)
    return g, moves


def replay(moves: list[Move]) -> Graph:
    """Apply a recorded move sequence from K3."""
    g = complete_graph(3)
    for m in moves:
        g, _ = apply(g, m)
    return g


def sample_node_count(cfg: DatagenConfig, rng: np.random.Generator) -> int:
    n = int(np.rint(rng.normal(cfg.n_mean, cfg.n_std)))
    n = max(n, cfg.n_floor)
    if cfg.n_cap is not None:
        n = min(n, cfg.n_cap)
    return n


def generate_dataset(
    cfg: DatagenConfig,
    rng: np.random.Generator,
    jobs: int = 1,
) -> list[GraphRecord]:
    """
    Generate cfg.count graphs.

    Item i draws from its own stream seeded by (base, i), where base comes
    from rng, so output is identical for any jobs value.
    """
    base = int(rng.integers(2**63))
    width = len(str(max(cfg.count - 1, 0)))

    def one(index: int) -> GraphRecord:
        item_rng = np.random.default_rng([base, index])
        n = sample_node_count(cfg, item_rng)
        p = float(item_rng.uniform(cfg.p_low, cfg.p_high))
        g, moves = generate_laman(n, p, item_rng)
        extra: dict[str, Any] = {"p": p}
        if cfg.record_moves:
            extra["moves"] = [m.to_dict() for m in moves]
        return GraphRecord(id=f"g{index:0{width}d}", graph=g, extra=extra)

    records = map_ordered(one, range(cfg.count), jobs)
    logger.info(f"Generated {len(records)} Laman graphs (p in [{cfg.p_low}, {cfg.p_high}])")
    return records
