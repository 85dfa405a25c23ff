"""The sampling chain: alternate corruption and learned reconstruction."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, Sequence

import numpy as np

from .corrupter import CorruptionConfig, CorruptionTrace, corrupt, require_within_bounds
from .errors import ConfigError, NotLaman, RetryBudgetExhausted
from .graph import Graph, to_record
from .moves import Move
from .reconstructor import ModelParams, sample_reconstruction
from .resilience import RetryConfig, retry_resample
from .rigidity import is_laman
from .workers import map_ordered

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainConfig:
    """Chain layout and per-transition budgets."""
    transitions: int = 1000
    chains: int = 20
    corruption: CorruptionConfig = field(default_factory=CorruptionConfig)
    max_reconstruction_steps: int = 30
    resample_transition_retries: int = 5
    seed: int = 0
    burn_in: int = 0
    thin: int = 1

    def __post_init__(self) -> None:
        for name in ("transitions", "chains", "max_reconstruction_steps", "thin"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.resample_transition_retries < 0 or self.burn_in < 0:
            raise ConfigError("resample_transition_retries and burn_in must be non-negative")

    def to_dict(self) -> dict[str, Any]:
        return {
            "transitions": self.transitions,
            "chains": self.chains,
            "corruption": self.corruption.to_dict(),
            "max_reconstruction_steps": self.max_reconstruction_steps,
            "resample_transition_retries": self.resample_transition_retries,
            "seed": self.seed,
            "burn_in": self.burn_in,
            "thin": self.thin,
        }


@dataclass(frozen=True)
class ChainRecord:
    """One transition of one chain."""
    chain: int
    index: int
    corrupted: Graph
    corruption_steps: int
    reconstructed: Graph
    reconstruction_steps: int
    # Failed attempts before this transition succeeded; each hit the step limit
    resamples: int = 0

    @property
    def hit_max_steps(self) -> bool:
        return self.resamples > 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "chain": self.chain,
            "index": self.index,
            "corrupted": to_record(self.corrupted),
            "corruption_steps": self.corruption_steps,
            "reconstructed": to_record(self.reconstructed),
            "reconstruction_steps": self.reconstruction_steps,
            "resamples": self.resamples,
            "hit_max_steps": self.hit_max_steps,
        }


def _transition(
    state: Graph,
    params: ModelParams,
    cfg: ChainConfig,
    rng: np.random.Generator,
) -> tuple[CorruptionTrace, Graph, list[Move]]:
    trace = corrupt(state, cfg.corruption, rng)
    sample, path = sample_reconstruction(
        trace.end,
        params,
        rng,
        max_steps=cfg.max_reconstruction_steps,
        size_min=cfg.corruption.size_min,
        size_max=cfg.corruption.size_max,
    )
    return trace, sample, path


def run_chain(
    init: Graph,
    params: ModelParams,
    cfg: ChainConfig,
    rng: np.random.Generator,
    chain: int = 0,
) -> Iterator[ChainRecord]:
    """
    Yield one record per transition, starting from init.

    A transition whose reconstruction hits the step limit is redrawn in
    full, corruption included.

    Raises:
        NotLaman: init is not Laman
        ConfigError: init lies outside the corruption size bounds
        RetryBudgetExhausted: a transition failed every redraw
    """
    if init.n < 2 or not is_laman(init):
        raise NotLaman(f"Chain start must be Laman, got {init!r}")
    require_within_bounds([init], cfg.corruption, "Chain start")
    retry = RetryConfig(max_retries=cfg.resample_transition_retries)
    state = init.relabeled()
    for i in range(cfg.transitions):
        try:
            (trace, sample, path), resamples = retry_resample(
                _transition, retry, state, params, cfg, rng
            )
        except RetryBudgetExhausted as e:
            e.diagnostics.update({"chain": chain, "transition": i, "state_n": state.n})
            logger.error(f"Chain {chain} aborted at transition {i}: {e}")
            raise
        logger.debug(
            f"Chain {chain} step {i}: {trace.k} corruption moves, "
            f"{len(path)} reconstruction moves, n={sample.n}"
        )
        yield ChainRecord(
            chain=chain,
            index=i,
            corrupted=trace.end,
            corruption_steps=trace.k,
            reconstructed=sample,
            reconstruction_steps=len(path),
            resamples=resamples,
        )
        state = sample.relabeled()


def run_chains(
    seed_pool: Sequence[Graph],
    params: ModelParams,
    cfg: ChainConfig,
    jobs: int = 1,
) -> list[ChainRecord]:
    """
    Run cfg.chains independent chains, chain-major, then drop cfg.burn_in
    transitions per chain and keep every cfg.thin-th.

    Chain c uses the stream seeded by (cfg.seed, c) and starts from a
    uniformly drawn seed graph.
    """
    if not seed_pool:
        raise ConfigError("Seed pool is empty")
    require_within_bounds(seed_pool, cfg.corruption, "Seed graph")

    def one(c: int) -> list[ChainRecord]:
        rng = np.random.default_rng([cfg.seed, c])
        init = seed_pool[int(rng.integers(len(seed_pool)))]
        return list(run_chain(init, params, cfg, rng, chain=c))

    per_chain = map_ordered(one, range(cfg.chains), jobs)
    records = [r for chain_records in per_chain for r in chain_records]
    resampled = sum(1 for r in records if r.hit_max_steps)
    logger.info(
        f"Ran {cfg.chains} chains x {cfg.transitions} transitions "
        f"({resampled} transitions redrawn)"
    )
    return subsample(records, cfg.burn_in, cfg.thin)


def subsample(records: Sequence[ChainRecord], burn_in: int = 0, thin: int = 1) -> list[ChainRecord]:
    """Drop the first burn_in transitions of each chain, then keep every thin-th."""
    if burn_in < 0 or thin < 1:
        raise ConfigError(f"Need burn_in >= 0 and thin >= 1, got {burn_in}, {thin}")
    return [r for r in records if r.index >= burn_in and (r.index - burn_in) % thin == 0]


def write_trace(path: str | Path, records: Sequence[ChainRecord], cfg: ChainConfig) -> None:
    """JSON Lines sidecar: a layout header, then one object per record."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        header = {"layout": {"chains": cfg.chains, "transitions": cfg.transitions},
                  "config": cfg.to_dict()}
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for r in records:
            f.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")
