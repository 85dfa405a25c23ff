"""Resilience utilities: bounded resampling of stochastic operations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, TypeVar

from .errors import MaxStepsExceeded, RetryBudgetExhausted

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class RetryConfig:
    """Configuration for resampling behavior."""
    max_retries: int = 5
    retryable: tuple[type[Exception], ...] = (MaxStepsExceeded,)


def retry_resample(
    func: Callable[..., T],
    config: RetryConfig | None = None,
    *args: Any,
    **kwargs: Any,
) -> tuple[T, int]:
    """
    Call a sampling function until it succeeds or the budget runs out.

    Each call must draw fresh randomness (the caller passes a shared rng),
    so a retry is a resample, not a replay. Non-retryable errors propagate
    unchanged.

    Returns:
        (result, number of failed attempts before the success)

    Raises:
        RetryBudgetExhausted: if every attempt raised a retryable error
    """
    if config is None:
        config = RetryConfig()

    last_exception: Exception | None = None

    for attempt in range(config.max_retries + 1):
        try:
            return func(*args, **kwargs), attempt
        except config.retryable as e:
            last_exception = e
            if attempt < config.max_retries:
                logger.warning(f"Resample {attempt + 1}/{config.max_retries}: {e}")

    raise RetryBudgetExhausted(
        f"All {config.max_retries} resamples exhausted",
        last_exception=last_exception,
        diagnostics={"attempts": config.max_retries + 1},
    )
