"""Hidden relu/dropout stack shared by the embedding architectures."""

import numpy as np

from ..engine.layers import Dense, Dropout
from ..engine.rng import RngStreams


class MLPTrunk:
    """dense(h1, relu) -> dropout -> dense(h2, relu) -> dropout -> ..."""

    def __init__(self, name: str, in_dim: int, hidden: list[int], dropout: float,
                 rngs: RngStreams, init: str):
        self.blocks: list[tuple[Dense, Dropout]] = []
        width = in_dim
        for depth, size in enumerate(hidden, start=1):
            dense = Dense(f"{name}.dense{depth}", width, size, "relu", rngs.init, init)
            drop = Dropout(f"{name}.dropout{depth}", dropout, rngs.dropout)
            self.blocks.append((dense, drop))
            width = size
        self.out_dim = width

    @property
    def layers(self) -> list:
        return [layer for block in self.blocks for layer in block]

    def forward(self, x: np.ndarray, training: bool) -> np.ndarray:
        for dense, drop in self.blocks:
            x = drop.forward(dense.forward(x), training=training)
        return x

    def backward(self, grad: np.ndarray) -> np.ndarray:
        for dense, drop in reversed(self.blocks):
            grad = dense.backward(drop.backward(grad))
        return grad
