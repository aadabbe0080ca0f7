"""Binary NCF baseline: the classification trunk with one sigmoid neuron."""

from typing import Optional

import numpy as np

from ..config import TrainConfig
from ..dataset.indexing import binarize_array
from ..engine.losses import binary_crossentropy
from ..exceptions import ConfigurationError
from .classification import ClassificationModel


class BinaryModel(ClassificationModel):
    """Predicts P(rating >= theta); retrained for every relevancy threshold."""

    kind = "binary"
    head_activation = "sigmoid"

    def __init__(self, num_users: int, num_items: int, v_max: int, theta: int, cfg: TrainConfig):
        if not 1 <= theta <= v_max:
            raise ConfigurationError(f"theta {theta} outside score range 1:{v_max}")
        self._theta = theta
        super().__init__(num_users, num_items, v_max, cfg)

    @property
    def head_width(self) -> int:
        return 1

    @property
    def theta(self) -> Optional[int]:
        return self._theta

    def forward(self, users: np.ndarray, items: np.ndarray, training: bool = False) -> np.ndarray:
        return super().forward(users, items, training)[:, 0]

    def backward(self, grad: np.ndarray) -> None:
        super().backward(np.asarray(grad).reshape(-1, 1))

    def loss(self, output: np.ndarray, ratings: np.ndarray) -> tuple[float, np.ndarray]:
        return binary_crossentropy(output, binarize_array(ratings, self._theta))

    def test_metric(self, output: np.ndarray, ratings: np.ndarray) -> float:
        labels = binarize_array(ratings, self._theta)
        return float(np.mean((output >= 0.5) == (labels == 1.0)))


def build_binary(num_users: int, num_items: int, theta: int, cfg: TrainConfig,
                 v_max: int = 5) -> BinaryModel:
    return BinaryModel(num_users, num_items, v_max, theta, cfg)
