"""Drawing reconstructions from a trained model."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import MaxStepsExceeded
from ..graph import Graph
from ..moves import DEFAULT_SIZE_MAX, DEFAULT_SIZE_MIN, Move, apply
from .network import Stop, score_actions
from .params import ModelParams

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 30


def sample_reconstruction(
    x: Graph,
    params: ModelParams,
    rng: np.random.Generator,
    max_steps: int = DEFAULT_MAX_STEPS,
    size_min: int = DEFAULT_SIZE_MIN,
    size_max: int = DEFAULT_SIZE_MAX,
) -> tuple[Graph, list[Move]]:
    """
    Apply sampled moves until the model samples STOP.

    Each draw conditions only on the current graph.

    Raises:
        MaxStepsExceeded: no STOP among the first max_steps draws
    """
    state = x
    path: list[Move] = []
    for _ in range(max_steps):
        dist = score_actions(state, params, size_min, size_max)
        action = dist.actions[int(rng.choice(len(dist.actions), p=dist.probabilities))]
        if isinstance(action, Stop):
            return state, path
        state, _ = apply(state, action)
        path.append(action)
    raise MaxStepsExceeded(f"No stop sampled within {max_steps} steps", steps=max_steps)
