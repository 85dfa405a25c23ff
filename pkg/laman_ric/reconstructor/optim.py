"""Adamax with linear warm-up and step decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import ModelParams


@dataclass
class Adamax:
    """Adamax (infinity-norm Adam) over a ModelParams, updated in place."""
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    u: dict[str, np.ndarray] = field(default_factory=dict)

    def step(self, params: ModelParams, grads: dict[str, np.ndarray], step_size: float) -> None:
        if not self.m:
            self.m = params.zeros_like()
            self.u = params.zeros_like()
        self.t += 1
        correction = step_size / (1.0 - self.beta1**self.t)
        for name, g in grads.items():
            m = self.m[name]
            u = self.u[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            np.maximum(self.beta2 * u, np.abs(g), out=u)
            params.arrays[name] -= correction * m / (u + self.eps)


@dataclass(frozen=True)
class StepSchedule:
    """
    Step size for a global update index.

    Linear warm-up from 0 over `warmup_epochs`, then division by 10 after
    each milestone epoch.
    """
    base: float
    steps_per_epoch: int
    warmup_epochs: int = 5
    milestones: tuple[int, ...] = (12, 24, 36)

    def __call__(self, step: int) -> float:
        epoch = step // self.steps_per_epoch
        rate = self.base / 10.0 ** sum(1 for e in self.milestones if epoch >= e)
        warmup_steps = self.warmup_epochs * self.steps_per_epoch
        if warmup_steps and step < warmup_steps:
            rate *= (step + 1) / warmup_steps
        return rate
