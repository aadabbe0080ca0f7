"""Central finite-difference verification of analytic gradients."""

import logging
from typing import Callable

from .tensors import Parameter

logger = logging.getLogger(__name__)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)


def gradient_check(
    loss_fn: Callable[[], float],
    grad_fn: Callable[[], None],
    parameters: list[Parameter],
    h: float = 1e-5,
    abs_tol: float = 0.0,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    `grad_fn` must run forward and backward once, accumulating into each
    parameter's `grad`; `loss_fn` must be a pure function of the current
    parameter values. Entries whose absolute discrepancy is within `abs_tol`
    count as exact (float64 noise floor of the loss difference).
    """
    for param in parameters:
        param.zero_grad()
    grad_fn()
    analytic = [param.grad.copy() for param in parameters]

    worst = 0.0
    for param, grad in zip(parameters, analytic):
        flat = param.value.reshape(-1)
        flat_grad = grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + h
            loss_plus = loss_fn()
            flat[i] = original - h
            loss_minus = loss_fn()
            flat[i] = original
            numeric = (loss_plus - loss_minus) / (2.0 * h)
            if abs(float(flat_grad[i]) - numeric) > abs_tol:
                worst = max(worst, relative_error(float(flat_grad[i]), numeric))

    for param in parameters:
        param.zero_grad()
    logger.debug(f"Gradient check over {sum(p.size for p in parameters)} values: {worst:.3e}")
    return worst
