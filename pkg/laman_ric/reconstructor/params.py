"""Model parameters, initialisation and the JSON checkpoint codec."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

import numpy as np

from ..errors import CheckpointError, ConfigError, NonFinite, ShapeMismatch

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1

DEFAULT_FOURIER_FREQS: tuple[float, ...] = tuple(float(np.pi / 2**j) for j in range(8))

# Number of summed node-embedding slots feeding each head, before the graph block
HEAD_SLOTS: dict[str, int] = {
    "stop": 0,
    "insert_i": 1,
    "insert_ii": 2,
    "delete_i": 1,
    "delete_ii": 2,
}

HEAD_FOR_KIND: dict[str, str] = {
    "I": "insert_i",
    "II": "insert_ii",
    "DI": "delete_i",
    "DII": "delete_ii",
}


@dataclass(frozen=True)
class ModelHyper:
    """Architecture hyperparameters."""
    hidden: int = 64
    rounds: int = 5
    fourier_freqs: tuple[float, ...] = DEFAULT_FOURIER_FREQS

    def __post_init__(self) -> None:
        if self.hidden < 1 or self.rounds < 1:
            raise ConfigError(
                f"hidden and rounds must be positive, got {self.hidden}, {self.rounds}"
            )
        if not self.fourier_freqs:
            raise ConfigError("At least one Fourier frequency is required")

    @property
    def feature_dim(self) -> int:
        return 2 * len(self.fourier_freqs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "hidden": self.hidden,
            "rounds": self.rounds,
            "fourier_freqs": list(self.fourier_freqs),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModelHyper:
        return cls(
            hidden=int(data.get("hidden", 64)),
            rounds=int(data.get("rounds", 5)),
            fourier_freqs=tuple(float(w) for w in data.get("fourier_freqs", DEFAULT_FOURIER_FREQS)),
        )


def expected_shapes(hyper: ModelHyper) -> dict[str, tuple[int, ...]]:
    """Every parameter name with its shape, in canonical order."""
    h = hyper.hidden
    shapes: dict[str, tuple[int, ...]] = {}
    for t in range(hyper.rounds):
        fan_in = hyper.feature_dim if t == 0 else h
        shapes[f"mp.{t}.w_self"] = (fan_in, h)
        shapes[f"mp.{t}.w_nbr"] = (fan_in, h)
        shapes[f"mp.{t}.b"] = (h,)
    shapes["readout.w1"] = (h, h)
    shapes["readout.b1"] = (h,)
    shapes["readout.w2"] = (h, h)
    shapes["readout.b2"] = (h,)
    for head, slots in HEAD_SLOTS.items():
        # Slot blocks of width h, then the 2h graph embedding
        shapes[f"head.{head}.w1"] = ((slots + 2) * h, h)
        shapes[f"head.{head}.b1"] = (h,)
        shapes[f"head.{head}.w2"] = (h,)
        shapes[f"head.{head}.b2"] = (1,)
    return shapes


@dataclass
class ModelParams:
    """
    All learned weights plus the hyperparameters that fix their shapes.

    Arrays are float64 and keyed by name in the order of `expected_shapes`.
    """
    hyper: ModelHyper
    arrays: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        shapes = expected_shapes(self.hyper)
        if set(self.arrays) != set(shapes):
            missing = sorted(set(shapes) - set(self.arrays))
            extra = sorted(set(self.arrays) - set(shapes))
            raise ShapeMismatch(f"Parameter names differ: missing {missing}, unexpected {extra}")
        ordered = {}
        for name, shape in shapes.items():
            arr = np.asarray(self.arrays[name], dtype=np.float64)
            if arr.shape != shape:
                raise ShapeMismatch(f"{name}: expected shape {shape}, got {arr.shape}")
            ordered[name] = arr
        self.arrays = ordered

    @classmethod
    def init(cls, hyper: ModelHyper, rng: np.random.Generator) -> ModelParams:
        """Weights ~ N(0, 1/fan_in), biases zero."""
        arrays = {}
        for name, shape in expected_shapes(hyper).items():
            if len(shape) == 2:
                arrays[name] = rng.normal(0.0, 1.0 / np.sqrt(shape[0]), size=shape)
            elif name.endswith(".w2"):
                arrays[name] = rng.normal(0.0, 1.0 / np.sqrt(shape[0]), size=shape)
            else:
                arrays[name] = np.zeros(shape)
        return cls(hyper, arrays)

    @classmethod
    def zeros(cls, hyper: ModelHyper) -> ModelParams:
        return cls(hyper, {name: np.zeros(shape) for name, shape in expected_shapes(hyper).items()})

    def __getitem__(self, name: str) -> np.ndarray:
        return self.arrays[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.arrays)

    def zeros_like(self) -> dict[str, np.ndarray]:
        return {name: np.zeros_like(arr) for name, arr in self.arrays.items()}

    def copy(self) -> ModelParams:
        return ModelParams(self.hyper, {name: arr.copy() for name, arr in self.arrays.items()})

    def check_finite(self) -> None:
        for name, arr in self.arrays.items():
            if not np.all(np.isfinite(arr)):
                raise NonFinite(f"Parameter {name} has non-finite entries")

    # -- checkpoint codec -------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": CHECKPOINT_VERSION,
            "hyper": self.hyper.to_dict(),
            "params": {
                name: {"shape": list(arr.shape), "data": arr.ravel().tolist()}
                for name, arr in self.arrays.items()
            },
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModelParams:
        """
        Raises:
            CheckpointError: wrong version, missing keys or non-finite values
            ShapeMismatch: arrays inconsistent with the hyperparameters
        """
        if not isinstance(data, dict):
            raise CheckpointError("Checkpoint must be a JSON object")
        if data.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"Unsupported checkpoint version {data.get('version')!r}, "
                f"expected {CHECKPOINT_VERSION}"
            )
        try:
            hyper = ModelHyper.from_dict(data["hyper"])
            arrays = {}
            for name, entry in data["params"].items():
                shape = tuple(int(s) for s in entry["shape"])
                flat = np.asarray(entry["data"], dtype=np.float64)
                if flat.size != int(np.prod(shape)):
                    raise ShapeMismatch(
                        f"{name}: {flat.size} values do not fill shape {shape}"
                    )
                arrays[name] = flat.reshape(shape)
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"Malformed checkpoint: {e}") from e
        params = cls(hyper, arrays)
        try:
            params.check_finite()
        except NonFinite as e:
            raise CheckpointError(str(e)) from e
        return params

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(self.to_dict(), f)
            f.write("\n")
        logger.info(f"Wrote checkpoint {path}")

    @classmethod
    def load(cls, path: str | Path) -> ModelParams:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise CheckpointError(f"{path}: invalid JSON: {e}") from e
        return cls.from_dict(data)
