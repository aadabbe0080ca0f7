"""End-to-end gradient verification of a full architecture."""

import logging
from typing import Optional

import numpy as np

from ..base.model import BaseModel
from ..engine.gradcheck import gradient_check

logger = logging.getLogger(__name__)

KINK_MARGIN = 1e-4
# Absolute discrepancy below this fraction of the loss is float64 rounding.
NOISE_FLOOR = 1e-8


def check_model_gradients(
    model: BaseModel,
    users: np.ndarray,
    items: np.ndarray,
    ratings: np.ndarray,
    h: float = 1e-5,
    max_redraws: int = 10,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Max relative gradient error in inference mode.

    If a relu pre-activation lies within KINK_MARGIN of zero the parameters
    are jittered and the evaluation point redrawn, up to `max_redraws` times.

    Entries whose analytic and numeric gradients differ by at most
    NOISE_FLOOR * max(1, |loss|) in absolute terms are skipped. This is looser
    than calling `gradient_check` with its default `abs_tol=0`: a wrong
    gradient on a parameter whose true gradient is itself below that floor
    goes unreported.
    """
    rng = rng or np.random.default_rng(0)
    parameters = model.parameters()

    for attempt in range(max_redraws + 1):
        model.forward(users, items, training=False)
        margin = model.relu_margin()
        if margin >= KINK_MARGIN:
            break
        logger.debug(f"{model.kind}: relu margin {margin:.2e} on attempt {attempt}, redrawing")
        for param in parameters:
            param.value += rng.normal(0.0, 1e-2, size=param.shape)

    def loss_fn() -> float:
        output = model.forward(users, items, training=False)
        return model.loss(output, ratings)[0]

    def grad_fn() -> None:
        output = model.forward(users, items, training=False)
        _, grad = model.loss(output, ratings)
        model.backward(grad)

    abs_tol = NOISE_FLOOR * max(1.0, abs(loss_fn()))
    return gradient_check(loss_fn, grad_fn, parameters, h=h, abs_tol=abs_tol)
