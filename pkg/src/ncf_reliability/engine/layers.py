"""Embedding, dense, dropout and merge layers with analytic gradients."""

import logging
from typing import Optional

import numpy as np

from ..base.layer import BaseLayer
from ..exceptions import ConfigurationError, ShapeError, StateError
from .init import initialize
from .tensors import DTYPE, Parameter, as_matrix, ensure_finite

logger = logging.getLogger(__name__)

ACTIVATIONS = ("relu", "linear", "softmax", "sigmoid")


def softmax(z: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction."""
    shifted = z - np.max(z, axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e, axis=1, keepdims=True)


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=DTYPE)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def dropout(
    x: np.ndarray, rate: float, training: bool, rng: np.random.Generator
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Inverted dropout; returns (output, mask) with mask None when identity."""
    if not 0.0 <= rate < 1.0:
        raise ConfigurationError(f"dropout rate must be in [0, 1), got {rate}")
    if not training or rate == 0.0:
        return x, None
    mask = (rng.random(x.shape) >= rate).astype(DTYPE) / (1.0 - rate)
    return x * mask, mask


class Embedding(BaseLayer):
    """Lookup table addressed by dense ids."""

    def __init__(
        self,
        name: str,
        num_entries: int,
        dim: int,
        rng: np.random.Generator,
        init: str = "glorot",
    ):
        super().__init__(name)
        self.table = Parameter(f"{name}.weights", initialize((num_entries, dim), init, rng))
        self._indices: Optional[np.ndarray] = None

    @property
    def num_entries(self) -> int:
        return self.table.shape[0]

    @property
    def dim(self) -> int:
        return self.table.shape[1]

    def forward(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices)
        if indices.ndim != 1 or not np.issubdtype(indices.dtype, np.integer):
            raise ShapeError(f"{self.name}: indices must be a 1-D integer array")
        if indices.size and (indices.min() < 0 or indices.max() >= self.num_entries):
            bad = indices[(indices < 0) | (indices >= self.num_entries)][0]
            raise ShapeError(
                f"{self.name}: index {int(bad)} out of range [0, {self.num_entries})"
            )
        self._indices = indices.copy()
        return self.table.value[indices]

    def backward(self, upstream: np.ndarray) -> None:
        if self._indices is None:
            raise StateError(f"{self.name}: backward called before forward")
        upstream = as_matrix(upstream, self.name)
        if upstream.shape != (len(self._indices), self.dim):
            raise ShapeError(f"{self.name}: upstream shape {upstream.shape} mismatch")
        np.add.at(self.table.grad, self._indices, upstream)
        self._indices = None
        return None

    def parameters(self) -> list[Parameter]:
        return [self.table]


class Dense(BaseLayer):
    """Fully connected layer: activation(x @ W + b)."""

    def __init__(
        self,
        name: str,
        in_dim: int,
        out_dim: int,
        activation: str,
        rng: np.random.Generator,
        init: str = "glorot",
    ):
        super().__init__(name)
        if activation not in ACTIVATIONS:
            raise ConfigurationError(f"Unknown activation: {activation}")
        self.activation = activation
        self.W = Parameter(f"{name}.W", initialize((in_dim, out_dim), init, rng))
        self.b = Parameter(f"{name}.b", np.zeros(out_dim, dtype=DTYPE))
        self._x: Optional[np.ndarray] = None
        self._z: Optional[np.ndarray] = None
        self._out: Optional[np.ndarray] = None

    @property
    def in_dim(self) -> int:
        return self.W.shape[0]

    @property
    def out_dim(self) -> int:
        return self.W.shape[1]

    @property
    def pre_activation(self) -> Optional[np.ndarray]:
        return self._z

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = as_matrix(x, self.name)
        if x.shape[1] != self.in_dim:
            raise ShapeError(f"{self.name}: expected {self.in_dim} input columns, got {x.shape[1]}")
        z = ensure_finite(x @ self.W.value + self.b.value, f"{self.name} pre-activation")
        if self.activation == "relu":
            out = np.maximum(z, 0.0)
        elif self.activation == "softmax":
            out = softmax(z)
        elif self.activation == "sigmoid":
            out = sigmoid(z)
        else:
            out = z
        self._x, self._z, self._out = x, z, out
        return out

    def backward(self, upstream: np.ndarray, wrt_logits: bool = False) -> np.ndarray:
        """Backpropagate `upstream`; with `wrt_logits` it is already d(loss)/dz."""
        if self._x is None:
            raise StateError(f"{self.name}: backward called before forward")
        upstream = as_matrix(upstream, self.name)
        if upstream.shape != self._z.shape:
            raise ShapeError(f"{self.name}: upstream shape {upstream.shape} mismatch")

        if wrt_logits or self.activation == "linear":
            delta = upstream
        elif self.activation == "relu":
            delta = upstream * (self._z > 0.0)
        elif self.activation == "sigmoid":
            delta = upstream * self._out * (1.0 - self._out)
        else:
            p = self._out
            delta = p * (upstream - np.sum(upstream * p, axis=1, keepdims=True))

        self.W.grad += self._x.T @ delta
        self.b.grad += np.sum(delta, axis=0)
        grad_input = delta @ self.W.value.T
        self._x = self._z = self._out = None
        return grad_input

    def parameters(self) -> list[Parameter]:
        return [self.W, self.b]


class Dropout(BaseLayer):
    """Inverted dropout; the cached mask is reused on the gradient."""

    def __init__(self, name: str, rate: float, rng: np.random.Generator):
        super().__init__(name)
        if not 0.0 <= rate < 1.0:
            raise ConfigurationError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self.rng = rng
        self._mask: Optional[np.ndarray] = None
        self._forwarded = False

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        out, self._mask = dropout(x, self.rate, training, self.rng)
        self._forwarded = True
        return out

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        if not self._forwarded:
            raise StateError(f"{self.name}: backward called before forward")
        self._forwarded = False
        if self._mask is None:
            return upstream
        return upstream * self._mask


class Concatenate(BaseLayer):
    """Column-wise merge of two batches."""

    def __init__(self, name: str = "concatenate"):
        super().__init__(name)
        self._split: Optional[int] = None

    def forward(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = as_matrix(a, self.name)
        b = as_matrix(b, self.name)
        if a.shape[0] != b.shape[0]:
            raise ShapeError(f"{self.name}: batch sizes differ ({a.shape[0]} vs {b.shape[0]})")
        self._split = a.shape[1]
        return np.hstack([a, b])

    def backward(self, upstream: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self._split is None:
            raise StateError(f"{self.name}: backward called before forward")
        p, self._split = self._split, None
        return upstream[:, :p], upstream[:, p:]


class DotMerge(BaseLayer):
    """Per-row inner product of two equally shaped batches."""

    def __init__(self, name: str = "dot"):
        super().__init__(name)
        self._u: Optional[np.ndarray] = None
        self._v: Optional[np.ndarray] = None

    def forward(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        u = as_matrix(u, self.name)
        v = as_matrix(v, self.name)
        if u.shape != v.shape:
            raise ShapeError(f"{self.name}: shapes differ ({u.shape} vs {v.shape})")
        self._u, self._v = u, v
        return np.sum(u * v, axis=1)

    def backward(self, upstream: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self._u is None:
            raise StateError(f"{self.name}: backward called before forward")
        g = np.asarray(upstream, dtype=DTYPE).reshape(-1, 1)
        grad_u, grad_v = g * self._v, g * self._u
        self._u = self._v = None
        return grad_u, grad_v
