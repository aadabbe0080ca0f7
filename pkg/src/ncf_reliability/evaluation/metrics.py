"""Precision/recall@N, per-rating precision and precision versus coverage."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from ..base.records import MetricValue, ScoredCandidate
from ..exceptions import UnsupportedModelError
from ..reliability import DEFAULT_RELIABILITY_MIN, recommend_baseline, recommend_classification
from .scoring import TestPredictions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UserOutcome:
    """Counts behind one user's precision and recall."""

    issued: int
    hits: int
    relevant: int


def recommend(
    predictions: TestPredictions,
    candidates: Sequence[ScoredCandidate],
    n: int,
    theta: int,
    reliability_min: float = DEFAULT_RELIABILITY_MIN,
) -> list[ScoredCandidate]:
    """Apply the method's top-N rule."""
    if predictions.method == "proposed":
        return recommend_classification(candidates, n, theta, reliability_min)
    return recommend_baseline(candidates, n, theta, predictions.kind)


def user_outcomes(
    predictions: TestPredictions,
    n: int,
    theta: int,
    reliability_min: float = DEFAULT_RELIABILITY_MIN,
    beta: Optional[float] = None,
) -> dict[int, UserOutcome]:
    """Per-user issued/hit/relevant counts; `beta` pre-filters on the continuous score."""
    outcomes = {}
    for user, pool in predictions.users.items():
        candidates = pool.candidates
        if beta is not None:
            candidates = [c for c in candidates if c.continuous >= beta]
        recommended = recommend(predictions, candidates, n, theta, reliability_min)
        hits = sum(1 for c in recommended if pool.truth[c.item_idx] >= theta)
        relevant = sum(1 for rating in pool.truth.values() if rating >= theta)
        outcomes[user] = UserOutcome(issued=len(recommended), hits=hits, relevant=relevant)
    return outcomes


def _macro(values: list[float]) -> MetricValue:
    if not values:
        return MetricValue(None, 0)
    return MetricValue(math.fsum(values) / len(values), len(values))


def _precision(outcomes: dict[int, UserOutcome]) -> MetricValue:
    return _macro([o.hits / o.issued for o in outcomes.values() if o.issued])


def evaluate_topn(
    predictions: TestPredictions,
    n: int,
    theta: int,
    reliability_min: float = DEFAULT_RELIABILITY_MIN,
) -> tuple[MetricValue, MetricValue]:
    """Macro-averaged (precision, recall) over the users where each is defined."""
    outcomes = user_outcomes(predictions, n, theta, reliability_min)
    recall = _macro([o.hits / o.relevant for o in outcomes.values() if o.relevant])
    return _precision(outcomes), recall


def round_half_up(score: float, v_max: int) -> int:
    """Nearest integer rating, .5 rounds up, clamped to [1, V]."""
    return int(min(max(math.floor(score + 0.5), 1), v_max))


def predicted_rating(candidate: ScoredCandidate, v_max: int) -> int:
    if candidate.pair is not None:
        return candidate.pair.rating
    return round_half_up(min(max(candidate.score, 1.0), float(v_max)), v_max)


def evaluate_per_rating(
    predictions: TestPredictions,
    rating: int,
    n: Optional[int] = None,
) -> MetricValue:
    """Share of interactions predicted as `rating` whose true rating is `rating`.

    With `n`, only each user's n candidates with the highest continuous score
    are counted.
    """
    if predictions.kind == "binary":
        raise UnsupportedModelError("binary model is unsupported for per-rating evaluation")

    predicted = correct = 0
    for pool in predictions.users.values():
        candidates = pool.candidates
        if n is not None:
            candidates = sorted(candidates, key=lambda c: (-c.continuous, c.item_idx))[:n]
        for candidate in candidates:
            if predicted_rating(candidate, predictions.v_max) == rating:
                predicted += 1
                correct += pool.truth[candidate.item_idx] == rating
    if predicted == 0:
        return MetricValue(None, 0)
    return MetricValue(correct / predicted, predicted)


def evaluate_precision_vs_coverage(
    predictions: TestPredictions,
    n: int,
    theta: int,
    beta: float,
    reliability_min: float = DEFAULT_RELIABILITY_MIN,
) -> tuple[MetricValue, MetricValue]:
    """(precision, coverage) after keeping candidates whose score is >= beta."""
    if predictions.kind == "binary":
        raise UnsupportedModelError(
            "binary model is unsupported for precision-vs-coverage evaluation"
        )
    outcomes = user_outcomes(predictions, n, theta, reliability_min, beta=beta)
    requested = n * len(outcomes)
    if requested == 0:
        coverage = MetricValue(None, 0)
    else:
        coverage = MetricValue(sum(o.issued for o in outcomes.values()) / requested, requested)
    return _precision(outcomes), coverage

