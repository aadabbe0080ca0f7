"""Recommendation-quality experiments."""

from .grid import grid_from_predictions, run_experiment_grid
from .metrics import (
    UserOutcome,
    evaluate_per_rating,
    evaluate_precision_vs_coverage,
    evaluate_topn,
    recommend,
    round_half_up,
    user_outcomes,
)
from .scoring import METHODS, TestPredictions, UserCandidates, score_models, score_test_set

__all__ = [
    "METHODS",
    "TestPredictions",
    "UserCandidates",
    "UserOutcome",
    "evaluate_per_rating",
    "evaluate_precision_vs_coverage",
    "evaluate_topn",
    "grid_from_predictions",
    "recommend",
    "round_half_up",
    "run_experiment_grid",
    "score_models",
    "score_test_set",
    "user_outcomes",
]
