"""Adam optimiser with bias correction."""

import logging
from dataclasses import dataclass

import numpy as np

from .tensors import Parameter

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    """Shared step counter and hyperparameters."""

    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0


class Adam:
    """Adam over a fixed parameter list; moments live on each Parameter."""

    def __init__(self, parameters: list[Parameter], state: AdamState | None = None):
        self.parameters = parameters
        self.state = state or AdamState()

    def step(self) -> None:
        adam_step(self.parameters, self.state)

    def zero_grad(self) -> None:
        for param in self.parameters:
            param.zero_grad()


def adam_step(parameters: list[Parameter], state: AdamState) -> None:
    """One update of every parameter from its accumulated grad, then zero the grads."""
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t

    for param in parameters:
        g = param.grad
        param.adam_m *= state.beta1
        param.adam_m += (1.0 - state.beta1) * g
        param.adam_v *= state.beta2
        param.adam_v += (1.0 - state.beta2) * (g * g)

        m_hat = param.adam_m / bc1
        v_hat = param.adam_v / bc2
        param.value -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
        param.zero_grad()
