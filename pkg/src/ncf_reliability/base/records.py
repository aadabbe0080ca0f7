"""Dataclasses for ratings, splits, predictions and reports."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import ShapeError

USER, ITEM, RATING = 0, 1, 2


@dataclass(frozen=True)
class RatingRecord:
    """One explicit vote as read from a rating file."""

    user_raw: int
    item_raw: int
    rating: int
    timestamp: Optional[int] = None


@dataclass
class DatasetIndex:
    """Dense index maps for users and items."""

    user_map: dict[int, int]
    item_map: dict[int, int]
    v_max: int
    num_ratings: int
    _user_raw: list[int] = field(default_factory=list, repr=False)
    _item_raw: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self._user_raw:
            self._user_raw = sorted(self.user_map, key=self.user_map.__getitem__)
        if not self._item_raw:
            self._item_raw = sorted(self.item_map, key=self.item_map.__getitem__)

    @property
    def num_users(self) -> int:
        return len(self.user_map)

    @property
    def num_items(self) -> int:
        return len(self.item_map)

    def user_raw(self, user_idx: int) -> int:
        """Inverse lookup of a dense user index."""
        return self._user_raw[user_idx]

    def item_raw(self, item_idx: int) -> int:
        """Inverse lookup of a dense item index."""
        return self._item_raw[item_idx]


@dataclass(frozen=True)
class SplitDataset:
    """Train/test partition of index-remapped interactions.

    `train` and `test` are read-only int64 arrays with columns
    (user_idx, item_idx, rating).
    """

    train: np.ndarray
    test: np.ndarray
    split_seed: int
    train_ratio: float

    def __post_init__(self) -> None:
        for name in ("train", "test"):
            array = getattr(self, name)
            if array.ndim != 2 or array.shape[1] != 3:
                raise ShapeError(f"{name} must have shape (n, 3), got {array.shape}")
            array.flags.writeable = False

    @property
    def num_ratings(self) -> int:
        return len(self.train) + len(self.test)

    def test_counts_per_user(self) -> dict[int, int]:
        """Number of held-out interactions per user index."""
        users, counts = np.unique(self.test[:, USER], return_counts=True)
        return {int(u): int(c) for u, c in zip(users, counts)}


@dataclass(frozen=True)
class ClassDistribution:
    """Softmax output of the classification head over ratings 1..V."""

    probs: np.ndarray
    v_max: int

    def __post_init__(self) -> None:
        if self.probs.shape != (self.v_max,):
            raise ShapeError(f"expected {self.v_max} probabilities, got shape {self.probs.shape}")
        if np.any(self.probs < 0.0) or np.any(self.probs > 1.0):
            raise ShapeError("probabilities must lie in [0, 1]")
        if abs(float(np.sum(self.probs)) - 1.0) > 1e-9:
            raise ShapeError(f"probabilities sum to {float(np.sum(self.probs))!r}, expected 1")


@dataclass(frozen=True)
class PredictionPair:
    """A discrete rating with the probability mass the model puts on it."""

    rating: int
    reliability: float


@dataclass(frozen=True)
class ScoredCandidate:
    """An item considered for recommendation.

    Classification candidates carry `pair` (and `expected`, the expected
    rating used for beta filtering and the baseline ranking); the regression
    family and the binary model carry `score`.
    """

    item_idx: int
    pair: Optional[PredictionPair] = None
    score: Optional[float] = None
    expected: Optional[float] = None

    def __post_init__(self) -> None:
        if (self.pair is None) == (self.score is None):
            raise ShapeError("exactly one of pair/score must be set")

    @property
    def continuous(self) -> float:
        """Scalar compared against beta."""
        if self.pair is not None:
            return float(self.expected if self.expected is not None else self.pair.rating)
        return float(self.score)


@dataclass(frozen=True)
class EpochStats:
    """Losses and timing of one completed epoch."""

    epoch: int
    train_loss: float
    test_loss: Optional[float]
    test_metric: Optional[float]
    seconds: float


@dataclass
class TrainHistory:
    """Per-epoch training record; `metric_name` is accuracy or mae."""

    kind: str
    metric_name: str
    epochs: list[EpochStats] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.epochs)

    @property
    def train_losses(self) -> list[float]:
        return [e.train_loss for e in self.epochs]


@dataclass(frozen=True)
class MetricValue:
    """A metric cell; `value` is None when the denominator is zero."""

    value: Optional[float]
    denominator: int

    @property
    def absent(self) -> bool:
        return self.value is None


@dataclass
class MetricsReport:
    """All cells of an experiment grid.

    Keys: precision/recall[(N, theta, method)], per_rating[(rating, N, method)]
    with N None for the all-interaction value, pvc[(N, theta, beta, method)]
    mapping to (precision, coverage).
    """

    precision: dict[tuple[int, int, str], MetricValue] = field(default_factory=dict)
    recall: dict[tuple[int, int, str], MetricValue] = field(default_factory=dict)
    per_rating: dict[tuple[int, Optional[int], str], MetricValue] = field(default_factory=dict)
    pvc: dict[tuple[int, int, float, str], tuple[MetricValue, MetricValue]] = field(
        default_factory=dict
    )
