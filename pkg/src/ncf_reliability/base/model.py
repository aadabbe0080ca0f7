"""Abstract base class for the recommender architectures."""

import logging
from abc import ABC, abstractmethod
from typing import Any, Optional

import numpy as np

from ..engine.layers import Dense
from ..engine.optim import AdamState
from ..engine.rng import RngStreams
from ..engine.tensors import Parameter
from ..exceptions import ShapeError
from .layer import BaseLayer


class BaseModel(ABC):
    """A user/item model with its parameters, RNG streams and optimiser state."""

    kind: str = ""
    merge: str = ""
    metric_name: str = ""

    def __init__(self, num_users: int, num_items: int, v_max: int, cfg: Any):
        if num_users < 1 or num_items < 1:
            raise ShapeError("num_users and num_items must be positive")
        self.num_users = num_users
        self.num_items = num_items
        self.v_max = v_max
        self.cfg = cfg
        self.rngs = RngStreams.from_seed(cfg.seed)
        self.adam = AdamState(learning_rate=cfg.learning_rate)
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def layers(self) -> list[BaseLayer]:
        """Layers in a fixed order; parameter order follows it."""
        pass

    @abstractmethod
    def forward(self, users: np.ndarray, items: np.ndarray, training: bool = False) -> np.ndarray:
        """Raw head output: (n, V) probabilities or an (n,) vector."""
        pass

    @abstractmethod
    def backward(self, grad: np.ndarray) -> None:
        """Backpropagate the loss gradient returned by `loss`."""
        pass

    @abstractmethod
    def loss(self, output: np.ndarray, ratings: np.ndarray) -> tuple[float, np.ndarray]:
        """Encode raw ratings as this model's targets and score `output`."""
        pass

    @abstractmethod
    def test_metric(self, output: np.ndarray, ratings: np.ndarray) -> float:
        """Accuracy (classifiers) or MAE (regressors) of `output`."""
        pass

    def predict(self, users: np.ndarray, items: np.ndarray) -> np.ndarray:
        """Inference-mode output; regressors clamp to [1, V]."""
        users, items = self.check_indices(users, items)
        return self.forward(users, items, training=False)

    def parameters(self) -> list[Parameter]:
        return [p for layer in self.layers for p in layer.parameters()]

    @property
    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def check_indices(self, users: np.ndarray, items: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        users = np.asarray(users, dtype=np.int64).reshape(-1)
        items = np.asarray(items, dtype=np.int64).reshape(-1)
        if users.shape != items.shape:
            raise ShapeError("users and items must have the same length")
        if users.size and (users.min() < 0 or users.max() >= self.num_users):
            raise ShapeError(f"user index out of range [0, {self.num_users})")
        if items.size and (items.min() < 0 or items.max() >= self.num_items):
            raise ShapeError(f"item index out of range [0, {self.num_items})")
        return users, items

    def relu_margin(self) -> float:
        """Smallest |pre-activation| cached by relu layers after a forward pass."""
        margins = [
            float(np.min(np.abs(layer.pre_activation)))
            for layer in self.layers
            if isinstance(layer, Dense) and layer.activation == "relu"
            and layer.pre_activation is not None and layer.pre_activation.size
        ]
        return min(margins) if margins else float("inf")

    def checkpoint_meta(self) -> dict[str, Any]:
        """Topology description stored next to the tensors."""
        return {
            "kind": self.kind,
            "num_users": self.num_users,
            "num_items": self.num_items,
            "v_max": self.v_max,
            "embed_dim": self.cfg.embed_dim,
            "merge": self.merge,
            "seed": self.rngs.seed,
            "adam_t": self.adam.t,
            "theta": self.theta,
        }

    def buffers(self) -> dict[str, np.ndarray]:
        """Non-trainable arrays a checkpoint must carry."""
        return {}

    @property
    def theta(self) -> Optional[int]:
        return None

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(users={self.num_users}, items={self.num_items}, "
            f"V={self.v_max}, params={self.parameter_count})"
        )
