"""Model outputs on the held-out interactions, grouped per user."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..base.model import BaseModel
from ..base.records import ITEM, RATING, USER, ScoredCandidate, SplitDataset
from ..exceptions import ConfigurationError
from ..models import predict
from ..reliability import candidates_from_output

logger = logging.getLogger(__name__)

# Evaluation method -> architecture it runs on.
METHODS: dict[str, str] = {
    "proposed": "classification",
    "classification": "classification",
    "regression": "regression",
    "binary": "binary",
    "deepmf": "deepmf",
}

SCORE_BATCH = 4096


@dataclass
class UserCandidates:
    """One user's test items: model view and ground truth."""

    candidates: list[ScoredCandidate]
    truth: dict[int, int]


@dataclass
class TestPredictions:
    """Everything the metrics need about one method on one split."""

    __test__ = False

    method: str
    v_max: int
    users: dict[int, UserCandidates] = field(default_factory=dict)
    theta: Optional[int] = None

    @property
    def kind(self) -> str:
        return METHODS[self.method]

    @classmethod
    def from_arrays(
        cls,
        method: str,
        v_max: int,
        users: Sequence[int],
        items: Sequence[int],
        ratings: Sequence[int],
        output: np.ndarray,
        theta: Optional[int] = None,
    ) -> "TestPredictions":
        """Group per-interaction outputs by user, users ascending."""
        if method not in METHODS:
            raise ConfigurationError(f"Unknown method: {method}. Supported: {', '.join(METHODS)}")
        users = np.asarray(users, dtype=np.int64)
        items = np.asarray(items, dtype=np.int64)
        ratings = np.asarray(ratings, dtype=np.int64)
        output = np.asarray(output, dtype=np.float64)

        predictions = cls(method=method, v_max=v_max, theta=theta)
        order = np.argsort(users, kind="stable")
        boundaries = np.flatnonzero(np.diff(users[order])) + 1
        for rows in np.split(order, boundaries):
            if rows.size == 0:
                continue
            user = int(users[rows[0]])
            predictions.users[user] = UserCandidates(
                candidates=candidates_from_output(METHODS[method], items[rows], output[rows], v_max),
                truth={int(i): int(r) for i, r in zip(items[rows], ratings[rows])},
            )
        return predictions


def score_test_set(model: BaseModel, dataset: SplitDataset, method: str) -> TestPredictions:
    """Run inference on every test interaction (dropout off)."""
    if METHODS.get(method) != model.kind:
        raise ConfigurationError(f"method {method} cannot run on a {model.kind} model")
    test = dataset.test
    outputs = []
    for start in range(0, len(test), SCORE_BATCH):
        batch = test[start:start + SCORE_BATCH]
        outputs.append(predict(model, batch[:, USER], batch[:, ITEM]))
    output = np.concatenate(outputs, axis=0) if outputs else np.empty((0,))
    logger.info(f"Scored {len(test)} test interactions for {method}")
    return TestPredictions.from_arrays(
        method, model.v_max, test[:, USER], test[:, ITEM], test[:, RATING], output,
        theta=model.theta,
    )


def score_models(models: Sequence[BaseModel], dataset: SplitDataset) -> list[TestPredictions]:
    """Predictions for every method the trained models support."""
    predictions = []
    for model in models:
        for method, kind in METHODS.items():
            if kind == model.kind:
                predictions.append(score_test_set(model, dataset, method))
    return predictions
