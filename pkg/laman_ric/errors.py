"""Exception hierarchy for laman-ric."""

from __future__ import annotations

from typing import Any


class RicError(Exception):
    """Base exception for laman-ric errors."""
    pass


class ConfigError(RicError):
    """Invalid configuration value or unknown option."""
    pass


class InputFormatError(RicError):
    """A graph file or checkpoint could not be parsed."""
    pass


# Graph construction

class GraphError(RicError):
    """Invalid graph structure."""
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class EndpointOutOfRange(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class EdgeExists(GraphError):
    pass


# Rigidity queries

class RigidityError(RicError):
    """Rigidity query outside its domain."""
    pass


class TooSmall(RigidityError):
    pass


class TooLarge(RigidityError):
    pass


class NotSparse(RigidityError):
    """Graph violates (2,3)-sparsity where sparsity is required."""
    pass


class DodIntractable(RigidityError):
    """Graph too large for exact degree-of-decomposability counting."""
    pass


# Moves

class MoveError(RicError):
    pass


class NotLaman(MoveError):
    pass


class IllegalMove(MoveError):
    """A move cannot be applied to the given graph."""

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class ReceiptMismatch(MoveError):
    pass


class NoLegalMoves(MoveError):
    pass


# Reconstruction model

class ModelError(RicError):
    pass


class ShapeMismatch(ModelError):
    pass


class NonFinite(ModelError):
    pass


class TargetNotInLegalSet(ModelError):
    """A reverse move was not found among the enumerated legal moves."""
    pass


class MaxStepsExceeded(ModelError):
    def __init__(self, message: str, steps: int):
        super().__init__(message)
        self.steps = steps


class CheckpointError(ModelError):
    pass


# Chain / stats

class RetryBudgetExhausted(RicError):
    """All transition resampling attempts failed."""

    def __init__(
        self,
        message: str,
        last_exception: Exception | None = None,
        diagnostics: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.last_exception = last_exception
        self.diagnostics = diagnostics or {}


class StatsError(RicError):
    pass


class EmptySample(StatsError):
    pass
