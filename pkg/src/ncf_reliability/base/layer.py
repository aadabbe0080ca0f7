"""Abstract base class for network layers."""

import logging
from abc import ABC, abstractmethod
from typing import Any

from ..engine.tensors import Parameter


class BaseLayer(ABC):
    """A differentiable block that caches what its backward pass needs."""

    def __init__(self, name: str):
        self.name = name
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def forward(self, *inputs: Any, **kwargs: Any) -> Any:
        """Compute the layer output and cache intermediate values."""
        pass

    @abstractmethod
    def backward(self, upstream: Any) -> Any:
        """Accumulate parameter gradients and return input gradients."""
        pass

    def parameters(self) -> list[Parameter]:
        """Trainable tensors owned by this layer."""
        return []

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name!r})"
