"""Learned reconstruction distribution over legal moves plus a stop token."""

from .network import (
    STOP,
    ActionDistribution,
    Stop,
    featurize,
    message_pass,
    score_actions,
)
from .optim import Adamax, StepSchedule
from .params import ModelHyper, ModelParams
from .sampling import sample_reconstruction
from .training import (
    EpochLog,
    TrainConfig,
    TrainingEvaluation,
    evaluate,
    grad,
    loss,
    loss_and_grad,
    train,
    uniform_loss,
    write_training_log,
)

__all__ = [
    "STOP",
    "ActionDistribution",
    "Adamax",
    "EpochLog",
    "ModelHyper",
    "ModelParams",
    "StepSchedule",
    "Stop",
    "TrainConfig",
    "TrainingEvaluation",
    "evaluate",
    "featurize",
    "grad",
    "loss",
    "loss_and_grad",
    "message_pass",
    "sample_reconstruction",
    "score_actions",
    "train",
    "uniform_loss",
    "write_training_log",
]
