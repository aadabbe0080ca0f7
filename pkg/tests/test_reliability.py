"""Tests for prediction pairs and reliability-filtered recommendation."""

import numpy as np
import pytest

from ncf_reliability.base.records import ClassDistribution, PredictionPair, ScoredCandidate
from ncf_reliability.exceptions import ConfigurationError, ShapeError, UnsupportedModelError
from ncf_reliability.reliability import (
    candidates_from_output,
    expected_rating,
    recommend_baseline,
    recommend_classification,
    to_pair,
)

# Item i carries the i-th pair of the walk-through example.
EXAMPLE_PAIRS = [(5, 0.3), (5, 0.2), (5, 1.0), (5, 0.9), (4, 0.8), (4, 0.4), (4, 0.7), (3, 0.7)]


def dist(*probs: float) -> ClassDistribution:
    return ClassDistribution(np.array(probs, dtype=np.float64), len(probs))


def example_candidates() -> list[ScoredCandidate]:
    return [ScoredCandidate(i, pair=PredictionPair(r, rel)) for i, (r, rel) in enumerate(EXAMPLE_PAIRS)]


def pairs(candidates):
    return [(c.pair.rating, c.pair.reliability) for c in candidates]


class TestClassDistribution:
    """Tests for ClassDistribution validation."""

    def test_must_sum_to_one(self):
        """Rows off by more than 1e-9 are rejected."""
        with pytest.raises(ShapeError, match="sum"):
            dist(0.5, 0.6)

    def test_length_must_match_scale(self):
        """The vector has exactly V entries."""
        with pytest.raises(ShapeError):
            ClassDistribution(np.array([0.5, 0.5]), 5)


class TestToPair:
    """Tests for to_pair."""

    def test_argmax(self):
        """The most probable class and its mass."""
        assert to_pair(dist(0.1, 0.1, 0.2, 0.5, 0.1)) == PredictionPair(4, 0.5)

    def test_tie_takes_lowest_rating(self):
        """Ties resolve to the lowest class."""
        assert to_pair(dist(0.2, 0.2, 0.2, 0.2, 0.2)) == PredictionPair(1, 0.2)

    def test_one_hot(self):
        """A certain prediction has reliability 1."""
        assert to_pair(dist(0.0, 0.0, 0.0, 0.0, 1.0)) == PredictionPair(5, 1.0)

    def test_rescaling_keeps_rating(self, rng):
        """Renormalising a scaled distribution keeps the argmax."""
        probs = rng.dirichlet(np.ones(5))
        scaled = probs * 3.7
        assert to_pair(dist(*probs)).rating == to_pair(dist(*(scaled / scaled.sum()))).rating


class TestExpectedRating:
    """Tests for expected_rating."""

    @pytest.mark.parametrize("probs,expected", [
        ((0.0, 0.0, 1.0, 0.0, 0.0), 3.0),
        ((0.2, 0.2, 0.2, 0.2, 0.2), 3.0),
        ((0.0, 0.0, 0.0, 0.5, 0.5), 4.5),
    ])
    def test_values(self, probs, expected):
        """Probability-weighted mean rating."""
        assert expected_rating(dist(*probs)) == pytest.approx(expected)


class TestRecommendClassification:
    """Tests for recommend_classification."""

    def test_walkthrough_example(self):
        """High ratings with reliability >= 0.5, most reliable first."""
        result = recommend_classification(example_candidates(), 10, 4)
        assert pairs(result) == [(5, 1.0), (5, 0.9), (4, 0.8), (4, 0.7)]
        assert [c.item_idx for c in result] == [2, 3, 4, 6]

    def test_truncation(self):
        """N = 2 keeps the two most reliable."""
        assert pairs(recommend_classification(example_candidates(), 2, 4)) == [(5, 1.0), (5, 0.9)]

    def test_all_unreliable(self):
        """Nothing above the reliability floor gives an empty list."""
        candidates = [ScoredCandidate(i, pair=PredictionPair(5, 0.3)) for i in range(4)]
        assert recommend_classification(candidates, 3, 4) == []

    def test_tie_order(self):
        """Equal reliabilities rank by rating, then by item."""
        candidates = [
            ScoredCandidate(3, pair=PredictionPair(4, 0.6)),
            ScoredCandidate(1, pair=PredictionPair(4, 0.6)),
            ScoredCandidate(2, pair=PredictionPair(5, 0.6)),
        ]
        assert [c.item_idx for c in recommend_classification(candidates, 3, 4)] == [2, 1, 3]

    def test_n_must_be_positive(self):
        """N = 0 is an error."""
        with pytest.raises(ConfigurationError, match="N must be ≥ 1"):
            recommend_classification(example_candidates(), 0, 4)

    def test_pure(self):
        """Same input, same output; the input is not reordered."""
        candidates = example_candidates()
        first = recommend_classification(candidates, 5, 4)
        assert recommend_classification(candidates, 5, 4) == first
        assert [c.item_idx for c in candidates] == list(range(8))

    def test_random_instances_respect_contract(self, rng):
        """Sorted by reliability, thresholds honoured, at most N items."""
        for _ in range(100):
            candidates = [
                ScoredCandidate(i, pair=PredictionPair(int(rng.integers(1, 6)), float(rng.random())))
                for i in range(int(rng.integers(0, 12)))
            ]
            n, theta = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            result = recommend_classification(candidates, n, theta)
            reliabilities = [c.pair.reliability for c in result]
            assert len(result) <= n
            assert reliabilities == sorted(reliabilities, reverse=True)
            assert all(c.pair.rating >= theta and c.pair.reliability >= 0.5 for c in result)


class TestRecommendBaseline:
    """Tests for recommend_baseline."""

    def test_regression(self):
        """Scores >= theta, highest first."""
        candidates = [ScoredCandidate(0, score=4.6), ScoredCandidate(1, score=3.9),
                      ScoredCandidate(2, score=4.1)]
        assert [c.item_idx for c in recommend_baseline(candidates, 2, 4, "regression")] == [0, 2]

    def test_binary(self):
        """Probabilities >= 0.5, highest first."""
        candidates = [ScoredCandidate(0, score=0.9), ScoredCandidate(1, score=0.4)]
        assert [c.item_idx for c in recommend_baseline(candidates, 2, 4, "binary")] == [0]

    def test_classification_ignores_reliability(self):
        """The classification baseline ranks by expected rating and keeps unreliable pairs."""
        candidates = [
            ScoredCandidate(0, pair=PredictionPair(4, 0.8), expected=3.9),
            ScoredCandidate(1, pair=PredictionPair(5, 0.3), expected=4.2),
            ScoredCandidate(2, pair=PredictionPair(3, 0.9), expected=3.1),
        ]
        result = recommend_baseline(candidates, 5, 4, "classification")
        assert [c.item_idx for c in result] == [1, 0]

    def test_score_ties_by_item(self):
        """Equal scores rank by item index."""
        candidates = [ScoredCandidate(5, score=4.5), ScoredCandidate(2, score=4.5)]
        assert [c.item_idx for c in recommend_baseline(candidates, 2, 4, "deepmf")] == [2, 5]

    def test_unknown_kind(self):
        """Kinds without a rule are rejected."""
        with pytest.raises(UnsupportedModelError):
            recommend_baseline([], 2, 4, "autoencoder")


class TestCandidatesFromOutput:
    """Tests for candidates_from_output."""

    def test_classification(self):
        """Softmax rows become pairs plus expected ratings."""
        output = np.array([[0.0, 0.0, 0.0, 0.5, 0.5], [0.6, 0.1, 0.1, 0.1, 0.1]])
        candidates = candidates_from_output("classification", [7, 9], output, 5)
        assert candidates[0].pair == PredictionPair(4, 0.5)
        assert candidates[0].expected == pytest.approx(4.5)
        assert candidates[1].item_idx == 9

    def test_scores(self):
        """Scalar outputs become scores."""
        candidates = candidates_from_output("regression", [1, 2], np.array([3.5, 4.25]), 5)
        assert [c.score for c in candidates] == [3.5, 4.25]
        assert candidates[0].pair is None
