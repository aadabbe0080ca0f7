"""DeepMF baseline: two MLP towers over raw rating vectors merged by a dot product."""

from typing import Optional

import numpy as np

from ..base.layer import BaseLayer
from ..base.model import BaseModel
from ..config import TrainConfig
from ..dataset.indexing import rating_matrix
from ..engine.layers import Dense, DotMerge
from ..engine.losses import mse_loss
from ..exceptions import ShapeError


class Tower:
    """relu layers followed by a linear projection."""

    def __init__(self, name: str, in_dim: int, sizes: list[int], model: BaseModel):
        self.layers: list[Dense] = []
        width = in_dim
        for depth, size in enumerate(sizes, start=1):
            activation = "linear" if depth == len(sizes) else "relu"
            self.layers.append(Dense(f"{name}.dense{depth}", width, size, activation,
                                     model.rngs.init, model.cfg.init))
            width = size

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, grad: np.ndarray) -> None:
        for layer in reversed(self.layers):
            grad = layer.backward(grad)


class DeepMFModel(BaseModel):
    """User rows and item columns of the train rating matrix feed the towers."""

    kind = "deepmf"
    merge = "dot"
    metric_name = "mae"

    def __init__(self, num_users: int, num_items: int, v_max: int, cfg: TrainConfig,
                 interactions: Optional[np.ndarray] = None):
        super().__init__(num_users, num_items, v_max, cfg)
        if interactions is None:
            interactions = np.zeros((num_users, num_items), dtype=np.float64)
        if interactions.shape != (num_users, num_items):
            raise ShapeError(
                f"rating matrix shape {interactions.shape} != ({num_users}, {num_items})"
            )
        self.interactions = np.asarray(interactions, dtype=np.float64)
        self.user_tower = Tower("user_tower", num_items, cfg.deepmf_layers, self)
        self.item_tower = Tower("item_tower", num_users, cfg.deepmf_layers, self)
        self.dot = DotMerge()

    @property
    def layers(self) -> list[BaseLayer]:
        return [*self.user_tower.layers, *self.item_tower.layers, self.dot]

    def forward(self, users: np.ndarray, items: np.ndarray, training: bool = False) -> np.ndarray:
        users, items = self.check_indices(users, items)
        user_vectors = self.user_tower.forward(self.interactions[users])
        item_vectors = self.item_tower.forward(self.interactions[:, items].T)
        return self.dot.forward(user_vectors, item_vectors)

    def backward(self, grad: np.ndarray) -> None:
        grad_users, grad_items = self.dot.backward(grad)
        self.user_tower.backward(grad_users)
        self.item_tower.backward(grad_items)

    def loss(self, output: np.ndarray, ratings: np.ndarray) -> tuple[float, np.ndarray]:
        return mse_loss(output, np.asarray(ratings, dtype=np.float64))

    def predict(self, users: np.ndarray, items: np.ndarray) -> np.ndarray:
        return np.clip(super().predict(users, items), 1.0, float(self.v_max))

    def test_metric(self, output: np.ndarray, ratings: np.ndarray) -> float:
        clamped = np.clip(output, 1.0, float(self.v_max))
        return float(np.mean(np.abs(clamped - np.asarray(ratings, dtype=np.float64))))

    def buffers(self) -> dict[str, np.ndarray]:
        return {"interactions": self.interactions}


def build_deepmf(num_users: int, num_items: int, cfg: TrainConfig, train: Optional[np.ndarray] = None,
                 v_max: int = 5) -> DeepMFModel:
    """`train` is the (n, 3) train partition; the towers never see test ratings."""
    interactions = None if train is None else rating_matrix(train, num_users, num_items)
    return DeepMFModel(num_users, num_items, v_max, cfg, interactions)
