"""NCF regression baseline: one linear output neuron trained on raw ratings."""

import numpy as np

from ..base.layer import BaseLayer
from ..base.model import BaseModel
from ..config import TrainConfig
from ..engine.layers import Concatenate, Dense, DotMerge, Embedding
from ..engine.losses import mse_loss
from .trunk import MLPTrunk


class RegressionModel(BaseModel):
    """Embeddings merged by dot (default) or concatenate + MLP (`regression_trunk = mlp`)."""

    kind = "regression"
    metric_name = "mae"

    def __init__(self, num_users: int, num_items: int, v_max: int, cfg: TrainConfig):
        super().__init__(num_users, num_items, v_max, cfg)
        f = cfg.embed_dim
        self.merge = cfg.regression_trunk
        self.item_embedding = Embedding("item_embedding", num_items + 1, f, self.rngs.init, cfg.init)
        self.user_embedding = Embedding("user_embedding", num_users + 1, f, self.rngs.init, cfg.init)
        if self.merge == "dot":
            self.merge_layer = DotMerge()
            self.trunk = None
            head_in = 1
        else:
            self.merge_layer = Concatenate()
            self.trunk = MLPTrunk("mlp", 2 * f, cfg.hidden, cfg.dropout, self.rngs, cfg.init)
            head_in = self.trunk.out_dim
        self.head = Dense("output", head_in, 1, "linear", self.rngs.init, cfg.init)

    @property
    def layers(self) -> list[BaseLayer]:
        trunk = self.trunk.layers if self.trunk else []
        return [self.item_embedding, self.user_embedding, self.merge_layer, *trunk, self.head]

    def forward(self, users: np.ndarray, items: np.ndarray, training: bool = False) -> np.ndarray:
        merged = self.merge_layer.forward(self.item_embedding.forward(items),
                                          self.user_embedding.forward(users))
        if self.trunk is None:
            hidden = merged.reshape(-1, 1)
        else:
            hidden = self.trunk.forward(merged, training)
        return self.head.forward(hidden)[:, 0]

    def backward(self, grad: np.ndarray) -> None:
        grad = self.head.backward(np.asarray(grad).reshape(-1, 1))
        if self.trunk is None:
            grad = grad[:, 0]
        else:
            grad = self.trunk.backward(grad)
        grad_items, grad_users = self.merge_layer.backward(grad)
        self.item_embedding.backward(grad_items)
        self.user_embedding.backward(grad_users)

    def loss(self, output: np.ndarray, ratings: np.ndarray) -> tuple[float, np.ndarray]:
        return mse_loss(output, np.asarray(ratings, dtype=np.float64))

    def predict(self, users: np.ndarray, items: np.ndarray) -> np.ndarray:
        return np.clip(super().predict(users, items), 1.0, float(self.v_max))

    def test_metric(self, output: np.ndarray, ratings: np.ndarray) -> float:
        clamped = np.clip(output, 1.0, float(self.v_max))
        return float(np.mean(np.abs(clamped - np.asarray(ratings, dtype=np.float64))))


def build_regression(num_users: int, num_items: int, cfg: TrainConfig,
                     v_max: int = 5) -> RegressionModel:
    return RegressionModel(num_users, num_items, v_max, cfg)
