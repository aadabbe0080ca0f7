"""Parameter containers and finiteness guards."""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import NumericalError, ShapeError

DTYPE = np.float64


@dataclass
class Parameter:
    """A trainable tensor with its gradient and Adam moments."""

    name: str
    value: np.ndarray
    grad: np.ndarray = field(init=False, repr=False)
    adam_m: np.ndarray = field(init=False, repr=False)
    adam_v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.value = np.ascontiguousarray(self.value, dtype=DTYPE)
        self.grad = np.zeros_like(self.value)
        self.adam_m = np.zeros_like(self.value)
        self.adam_v = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad.fill(0.0)


def ensure_finite(array: np.ndarray, where: str) -> np.ndarray:
    """Raise NumericalError if the array holds NaN or Inf."""
    if not np.all(np.isfinite(array)):
        raise NumericalError(f"non-finite values in {where}")
    return array


def as_matrix(x: np.ndarray, where: str) -> np.ndarray:
    """Coerce to a 2-D float64 array."""
    x = np.asarray(x, dtype=DTYPE)
    if x.ndim != 2:
        raise ShapeError(f"{where}: expected a 2-D matrix, got shape {x.shape}")
    return x
