"""Weight initialisers."""

import numpy as np

from .tensors import DTYPE


def glorot_uniform(fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform in +-sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out)).astype(DTYPE)


def initialize(shape: tuple[int, int], scheme: str, rng: np.random.Generator) -> np.ndarray:
    if scheme == "zeros":
        return np.zeros(shape, dtype=DTYPE)
    return glorot_uniform(shape[0], shape[1], rng)
