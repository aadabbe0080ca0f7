"""The proposed classification NCF: embeddings -> concatenate -> MLP -> softmax over V."""

import numpy as np

from ..base.layer import BaseLayer
from ..base.model import BaseModel
from ..config import TrainConfig
from ..dataset.indexing import one_hot_matrix
from ..engine.layers import Concatenate, Dense, Embedding
from ..engine.losses import categorical_crossentropy
from .trunk import MLPTrunk


class ClassificationModel(BaseModel):
    """Returns a probability per rating class; argmax is the prediction, its mass the reliability."""

    kind = "classification"
    merge = "concatenate"
    metric_name = "accuracy"
    head_activation = "softmax"

    def __init__(self, num_users: int, num_items: int, v_max: int, cfg: TrainConfig):
        super().__init__(num_users, num_items, v_max, cfg)
        f = cfg.embed_dim
        # One spare row per table.
        self.item_embedding = Embedding("item_embedding", num_items + 1, f, self.rngs.init, cfg.init)
        self.user_embedding = Embedding("user_embedding", num_users + 1, f, self.rngs.init, cfg.init)
        self.concat = Concatenate()
        self.trunk = MLPTrunk("mlp", 2 * f, cfg.hidden, cfg.dropout, self.rngs, cfg.init)
        self.head = Dense("output", self.trunk.out_dim, self.head_width, self.head_activation,
                          self.rngs.init, cfg.init)

    @property
    def head_width(self) -> int:
        return self.v_max

    @property
    def layers(self) -> list[BaseLayer]:
        return [self.item_embedding, self.user_embedding, self.concat, *self.trunk.layers, self.head]

    def forward(self, users: np.ndarray, items: np.ndarray, training: bool = False) -> np.ndarray:
        x = self.concat.forward(self.item_embedding.forward(items), self.user_embedding.forward(users))
        return self.head.forward(self.trunk.forward(x, training))

    def backward(self, grad: np.ndarray) -> None:
        grad = self.trunk.backward(self.head.backward(grad, wrt_logits=True))
        grad_items, grad_users = self.concat.backward(grad)
        self.item_embedding.backward(grad_items)
        self.user_embedding.backward(grad_users)

    def loss(self, output: np.ndarray, ratings: np.ndarray) -> tuple[float, np.ndarray]:
        return categorical_crossentropy(output, one_hot_matrix(ratings, self.v_max))

    def test_metric(self, output: np.ndarray, ratings: np.ndarray) -> float:
        return float(np.mean(np.argmax(output, axis=1) + 1 == np.asarray(ratings)))


def build_classification(num_users: int, num_items: int, v_max: int,
                         cfg: TrainConfig) -> ClassificationModel:
    return ClassificationModel(num_users, num_items, v_max, cfg)
