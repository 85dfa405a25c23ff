"""The fixed corruption distribution: geometric-length runs of uniformly chosen legal moves."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import ConfigError, NoLegalMoves, NotLaman
from .graph import Graph, to_record
from .moves import (
    DEFAULT_SIZE_MAX,
    DEFAULT_SIZE_MIN,
    Move,
    MoveReceipt,
    apply,
    enumerate_legal,
    group_by_kind,
)
from .rigidity import is_laman

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorruptionConfig:
    """Corruption length law and the chain's size bounds."""
    mean_steps: float = 5.0
    size_min: int = DEFAULT_SIZE_MIN
    size_max: int = DEFAULT_SIZE_MAX

    def __post_init__(self) -> None:
        if not self.mean_steps >= 1:
            raise ConfigError(f"mean_steps must be >= 1, got {self.mean_steps}")
        if self.size_min < 3:
            raise ConfigError(f"size_min must be >= 3, got {self.size_min}")
        if self.size_max <= self.size_min:
            raise ConfigError(
                f"size_max ({self.size_max}) must exceed size_min ({self.size_min})"
            )

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CorruptionConfig:
        return cls(
            mean_steps=float(data.get("mean_steps", 5.0)),
            size_min=int(data.get("size_min", DEFAULT_SIZE_MIN)),
            size_max=int(data.get("size_max", DEFAULT_SIZE_MAX)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {"mean_steps": self.mean_steps, "size_min": self.size_min, "size_max": self.size_max}


@dataclass
class CorruptionTrace:
    """A corruption run: start graph, applied moves with receipts, visited states."""
    start: Graph
    steps: list[tuple[Move, MoveReceipt]] = field(default_factory=list)
    states: list[Graph] = field(default_factory=list)
    # Size bounds the run obeyed; reverse moves are scored under the same masks
    config: CorruptionConfig = field(default_factory=CorruptionConfig)

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> Graph:
        return self.states[-1] if self.states else self.start

    def to_dict(self) -> dict[str, Any]:
        # States keep their internal ids so moves can be read against them
        return {
            "start": _raw_record(self.start),
            "k": self.k,
            "config": self.config.to_dict(),
            "steps": [r.to_dict() for _, r in self.steps],
            "states": [_raw_record(s) for s in self.states],
            "end": to_record(self.end),
        }


def _raw_record(g: Graph) -> dict[str, Any]:
    return {"nodes": list(g.nodes), "edges": [list(e) for e in g.edges]}


def require_within_bounds(
    graphs: Sequence[Graph], cfg: CorruptionConfig, what: str = "Graph"
) -> None:
    """
    Raise ConfigError naming the first graph whose node count lies outside
    [cfg.size_min, cfg.size_max].
    """
    for i, g in enumerate(graphs):
        if not cfg.size_min <= g.n <= cfg.size_max:
            where = f"{what} {i}" if len(graphs) > 1 else what
            raise ConfigError(
                f"{where} has {g.n} nodes, outside "
                f"[size_min={cfg.size_min}, size_max={cfg.size_max}]"
            )


def sample_length(rng: np.random.Generator, mean_steps: float) -> int:
    """Corruption length k >= 1, geometric with success probability 1/mean_steps."""
    if not mean_steps >= 1:
        raise ConfigError(f"mean_steps must be >= 1, got {mean_steps}")
    return int(rng.geometric(1.0 / mean_steps))


def corruption_step(
    g: Graph, cfg: CorruptionConfig, rng: np.random.Generator
) -> tuple[Graph, Move, MoveReceipt]:
    """
    One corruption move from the current state.

    A kind is drawn uniformly among kinds with at least one legal move,
    then a move uniformly within that kind.

    Raises:
        NoLegalMoves
    """
    groups = [ms for ms in group_by_kind(enumerate_legal(g, cfg.size_min, cfg.size_max)).values()
              if ms]
    if not groups:
        raise NoLegalMoves(
            f"No legal moves on a {g.n}-node graph with bounds "
            f"[{cfg.size_min}, {cfg.size_max}]"
        )
    kind_moves = groups[int(rng.integers(len(groups)))]
    move = kind_moves[int(rng.integers(len(kind_moves)))]
    after, receipt = apply(g, move)
    return after, move, receipt


def corrupt(x: Graph, cfg: CorruptionConfig, rng: np.random.Generator) -> CorruptionTrace:
    """
    Sample a corruption trace from x.

    Raises:
        NotLaman, NoLegalMoves
        ConfigError: x lies outside [cfg.size_min, cfg.size_max]
    """
    if x.n < 2 or not is_laman(x):
        raise NotLaman(f"Corruption needs a Laman graph, got {x!r}")
    require_within_bounds([x], cfg)

    k = sample_length(rng, cfg.mean_steps)
    trace = CorruptionTrace(start=x, config=cfg)
    state = x
    for _ in range(k):
        state, move, receipt = corruption_step(state, cfg, rng)
        trace.steps.append((move, receipt))
        trace.states.append(state)
    logger.debug(f"Corrupted {x.n}-node graph with {k} moves -> {state.n} nodes")
    return trace
