"""Training by reversing corruption traces."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy.special import logsumexp, softmax

from ..corrupter import (
    CorruptionConfig,
    CorruptionTrace,
    corrupt,
    corruption_step,
    require_within_bounds,
)
from ..errors import ConfigError, EmptySample, NonFinite, TargetNotInLegalSet
from ..graph import Graph
from ..moves import inverse
from ..workers import map_ordered
from .network import STOP, Action, backward, forward, legal_actions
from .optim import Adamax, StepSchedule
from .params import ModelHyper, ModelParams

logger = logging.getLogger(__name__)

REFERENCE_BATCH = 128


@dataclass(frozen=True)
class TrainConfig:
    """Optimiser schedule and data settings."""
    epochs: int = 30
    batch_size: int = 256
    step_size: float = 2e-3
    warmup_epochs: int = 5
    milestones: tuple[int, ...] = (12, 24)
    # Scale step_size by batch_size / REFERENCE_BATCH
    scale_step_size: bool = False
    corruption: CorruptionConfig = field(default_factory=CorruptionConfig)
    hyper: ModelHyper = field(default_factory=ModelHyper)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1 or self.batch_size < 1:
            raise ConfigError(
                f"epochs and batch_size must be positive, got {self.epochs}, {self.batch_size}"
            )
        if not self.step_size > 0:
            raise ConfigError(f"step_size must be positive, got {self.step_size}")
        if self.warmup_epochs < 0:
            raise ConfigError(f"warmup_epochs must be non-negative, got {self.warmup_epochs}")
        if any(e < 1 or e >= self.epochs for e in self.milestones):
            raise ConfigError(
                f"Milestones {list(self.milestones)} must lie within 1..{self.epochs - 1}"
            )

    @property
    def effective_step_size(self) -> float:
        if self.scale_step_size:
            return self.step_size * self.batch_size / REFERENCE_BATCH
        return self.step_size

    def to_dict(self) -> dict[str, Any]:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "step_size": self.step_size,
            "warmup_epochs": self.warmup_epochs,
            "milestones": list(self.milestones),
            "scale_step_size": self.scale_step_size,
            "corruption": self.corruption.to_dict(),
            "hyper": self.hyper.to_dict(),
            "seed": self.seed,
        }


def reverse_targets(trace: CorruptionTrace) -> list[tuple[Graph, Action]]:
    """(state, target) pairs: each corruption move undone from the state it produced, then STOP."""
    pairs: list[tuple[Graph, Action]] = [
        (state, inverse(m, r)) for (m, r), state in zip(trace.steps, trace.states)
    ]
    pairs.append((trace.start, STOP))
    return pairs


def _target_index(actions: list[Action], target: Action, state: Graph) -> int:
    try:
        return actions.index(target)
    except ValueError:
        raise TargetNotInLegalSet(
            f"Reverse move {target} is not legal on {state!r}"
        ) from None


def trace_loss_and_grad(
    params: ModelParams,
    trace: CorruptionTrace,
    need_grad: bool = True,
) -> tuple[float, dict[str, np.ndarray] | None]:
    """Negative log-likelihood of the reverse path of one trace, with its gradient."""
    cfg = trace.config
    total = 0.0
    grads = params.zeros_like() if need_grad else None
    for state, target in reverse_targets(trace):
        actions = legal_actions(state, cfg.size_min, cfg.size_max)
        i = _target_index(actions, target, state)
        logits, cache = forward(params, state, actions[1:])  # type: ignore[arg-type]
        total += float(logsumexp(logits) - logits[i])
        if grads is not None:
            dlogits = softmax(logits)
            dlogits[i] -= 1.0
            for name, g in backward(params, cache, dlogits).items():
                grads[name] += g
    return total, grads


def loss(params: ModelParams, trace: CorruptionTrace) -> float:
    """
    Sum of -log p(reverse move | state) along the trace plus -log p(STOP | start).

    Raises:
        TargetNotInLegalSet
    """
    value, _ = trace_loss_and_grad(params, trace, need_grad=False)
    return value


def uniform_loss(trace: CorruptionTrace) -> float:
    """Loss of a model giving every legal action equal probability."""
    cfg = trace.config
    return float(sum(
        np.log(len(legal_actions(state, cfg.size_min, cfg.size_max)))
        for state, _ in reverse_targets(trace)
    ))


def loss_and_grad(
    params: ModelParams,
    traces: Sequence[CorruptionTrace],
    jobs: int = 1,
) -> tuple[float, dict[str, np.ndarray]]:
    """
    Mean loss over a batch and its gradient, reduced in trace order.

    Raises:
        NonFinite
    """
    if not traces:
        raise EmptySample("Cannot compute a gradient over an empty batch")
    results = map_ordered(lambda t: trace_loss_and_grad(params, t), traces, jobs)
    total = 0.0
    grads = params.zeros_like()
    for value, g in results:
        total += value
        assert g is not None
        for name, arr in g.items():
            grads[name] += arr
    scale = 1.0 / len(traces)
    mean_loss = total * scale
    for name in grads:
        grads[name] *= scale
    if not np.isfinite(mean_loss) or not all(np.all(np.isfinite(g)) for g in grads.values()):
        raise NonFinite(f"Non-finite loss or gradient (loss={mean_loss})")
    return mean_loss, grads


def grad(
    params: ModelParams,
    traces: Sequence[CorruptionTrace],
    jobs: int = 1,
) -> dict[str, np.ndarray]:
    """Gradient of the mean batch loss."""
    params.check_finite()
    return loss_and_grad(params, traces, jobs)[1]


@dataclass
class EpochLog:
    epoch: int
    loss: float
    step_size: float


def write_training_log(path: str | Path, log: Sequence[EpochLog]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["epoch", "loss", "step_size"])
        for row in log:
            writer.writerow([row.epoch, repr(row.loss), repr(row.step_size)])


def train(
    dataset: Sequence[Graph],
    cfg: TrainConfig,
    rng: np.random.Generator | None = None,
    jobs: int = 1,
    log: list[EpochLog] | None = None,
) -> ModelParams:
    """
    Fit a reconstruction model to a dataset.

    Every epoch draws a fresh corruption trace per graph, shuffles, and runs
    one Adamax update per minibatch. Appends one EpochLog per epoch to `log`.

    Raises:
        NonFinite: with the epoch and batch that produced it
        ConfigError: a graph lies outside the corruption size bounds
    """
    if not dataset:
        raise EmptySample("Training needs a non-empty dataset")
    require_within_bounds(dataset, cfg.corruption, "Training graph")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)

    params = ModelParams.init(cfg.hyper, rng)
    optimizer = Adamax()
    batches_per_epoch = -(-len(dataset) // cfg.batch_size)
    schedule = StepSchedule(
        base=cfg.effective_step_size,
        steps_per_epoch=batches_per_epoch,
        warmup_epochs=cfg.warmup_epochs,
        milestones=cfg.milestones,
    )

    step = 0
    for epoch in range(cfg.epochs):
        traces = [corrupt(x, cfg.corruption, rng) for x in dataset]
        order = rng.permutation(len(traces))
        epoch_loss = 0.0
        rate = schedule(step)
        for b in range(batches_per_epoch):
            batch = [traces[i] for i in order[b * cfg.batch_size:(b + 1) * cfg.batch_size]]
            try:
                batch_loss, grads = loss_and_grad(params, batch, jobs)
            except NonFinite as e:
                raise NonFinite(f"Epoch {epoch}, batch {b}: {e}") from e
            rate = schedule(step)
            optimizer.step(params, grads, rate)
            step += 1
            epoch_loss += batch_loss * len(batch)
        mean = epoch_loss / len(traces)
        logger.info(f"Epoch {epoch + 1}/{cfg.epochs}: loss {mean:.4f}, step size {rate:.2e}")
        if log is not None:
            log.append(EpochLog(epoch + 1, mean, rate))
    params.check_finite()
    return params


@dataclass(frozen=True)
class TrainingEvaluation:
    """Held-out diagnostics."""
    loss: float
    uniform_loss: float
    accuracy: float
    chance_accuracy: float
    count: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "loss": self.loss,
            "uniform_loss": self.uniform_loss,
            "top1_accuracy": self.accuracy,
            "chance_accuracy": self.chance_accuracy,
            "count": self.count,
        }


def evaluate(
    params: ModelParams,
    graphs: Sequence[Graph],
    cfg: CorruptionConfig,
    rng: np.random.Generator,
) -> TrainingEvaluation:
    """
    Mean trace loss against the uniform baseline, plus top-1 accuracy of
    the reverse move after a single corruption step.
    """
    if not graphs:
        raise EmptySample("Evaluation needs at least one graph")
    require_within_bounds(graphs, cfg, "Held-out graph")
    traces = [corrupt(x, cfg, rng) for x in graphs]
    model_loss = float(np.mean([loss(params, t) for t in traces]))
    base_loss = float(np.mean([uniform_loss(t) for t in traces]))

    hits = 0
    chance = 0.0
    for x in graphs:
        state, move, receipt = corruption_step(x, cfg, rng)
        target = inverse(move, receipt)
        actions = legal_actions(state, cfg.size_min, cfg.size_max)
        i = _target_index(actions, target, state)
        logits, _ = forward(params, state, actions[1:])  # type: ignore[arg-type]
        hits += int(np.argmax(logits) == i)
        chance += 1.0 / len(actions)
    return TrainingEvaluation(
        loss=model_loss,
        uniform_loss=base_loss,
        accuracy=hits / len(graphs),
        chance_accuracy=chance / len(graphs),
        count=len(graphs),
    )
