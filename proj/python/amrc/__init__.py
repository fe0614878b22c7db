"""Adaptive minimax risk classifiers for streams under concept drift."""

from ._amrc import (
    Learner,
    RunConfig,
    mistake_bound,
    run,
    synthetic_stream,
    transition_matrix,
)

__all__ = [
    "Learner",
    "RunConfig",
    "mistake_bound",
    "run",
    "synthetic_stream",
    "transition_matrix",
]
