"""<rating, reliability> pairs and reliability-filtered top-N recommendation."""

import logging
from typing import Sequence

import numpy as np

from .base.records import ClassDistribution, PredictionPair, ScoredCandidate
from .exceptions import ConfigurationError, UnsupportedModelError

logger = logging.getLogger(__name__)

DEFAULT_RELIABILITY_MIN = 0.5
BINARY_CUTOFF = 0.5


def to_pair(dist: ClassDistribution) -> PredictionPair:
    """Argmax rating (lowest class wins ties) and its probability."""
    index = int(np.argmax(dist.probs))
    return PredictionPair(rating=index + 1, reliability=float(dist.probs[index]))


def expected_rating(dist: ClassDistribution) -> float:
    """Probability-weighted mean rating."""
    value = float(np.dot(np.arange(1, dist.v_max + 1, dtype=np.float64), dist.probs))
    return min(max(value, 1.0), float(dist.v_max))


def candidates_from_output(
    kind: str, items: Sequence[int], output: np.ndarray, v_max: int
) -> list[ScoredCandidate]:
    """Wrap raw model outputs for ranking."""
    if kind == "classification":
        candidates = []
        for item, probs in zip(items, output):
            dist = ClassDistribution(np.asarray(probs, dtype=np.float64), v_max)
            candidates.append(
                ScoredCandidate(int(item), pair=to_pair(dist), expected=expected_rating(dist))
            )
        return candidates
    return [ScoredCandidate(int(item), score=float(score)) for item, score in zip(items, output)]


def _check_n(n: int) -> None:
    if n < 1:
        raise ConfigurationError("N must be ≥ 1")


def recommend_classification(
    candidates: Sequence[ScoredCandidate],
    n: int,
    theta: int,
    reliability_min: float = DEFAULT_RELIABILITY_MIN,
) -> list[ScoredCandidate]:
    """Keep rating >= theta and reliability >= reliability_min, most reliable first."""
    _check_n(n)
    kept = [
        c for c in candidates
        if c.pair is not None and c.pair.rating >= theta and c.pair.reliability >= reliability_min
    ]
    kept.sort(key=lambda c: (-c.pair.reliability, -c.pair.rating, c.item_idx))
    return kept[:n]


def recommend_baseline(
    candidates: Sequence[ScoredCandidate],
    n: int,
    theta: int,
    kind: str,
) -> list[ScoredCandidate]:
    """Ranking rules of the baselines; none of them looks at reliabilities."""
    _check_n(n)
    if kind in ("regression", "deepmf"):
        kept = [c for c in candidates if c.score is not None and c.score >= theta]
        kept.sort(key=lambda c: (-c.score, c.item_idx))
    elif kind == "classification":
        kept = [c for c in candidates if c.pair is not None and c.pair.rating >= theta]
        kept.sort(key=lambda c: (-c.continuous, c.item_idx))
    elif kind == "binary":
        kept = [c for c in candidates if c.score is not None and c.score >= BINARY_CUTOFF]
        kept.sort(key=lambda c: (-c.score, c.item_idx))
    else:
        raise UnsupportedModelError(f"No recommendation rule for model kind: {kind}")
    return kept[:n]
