"""Loss functions returning (mean loss, gradient)."""

import numpy as np

from ..exceptions import ShapeError
from .tensors import DTYPE, as_matrix

PROB_CLIP = 1e-12


def categorical_crossentropy(probs: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy and the combined softmax+CE gradient at the logits."""
    probs = as_matrix(probs, "categorical_crossentropy")
    targets = as_matrix(targets, "categorical_crossentropy")
    if probs.shape != targets.shape:
        raise ShapeError(f"probs {probs.shape} and targets {targets.shape} differ")
    if not np.all((targets == 0.0) | (targets == 1.0)) or not np.all(np.sum(targets, axis=1) == 1.0):
        raise ShapeError("targets must be one-hot rows")
    if not np.allclose(np.sum(probs, axis=1), 1.0, rtol=0.0, atol=1e-9):
        raise ShapeError("probability rows must sum to 1")
    batch = probs.shape[0]
    p_true = np.clip(np.sum(probs * targets, axis=1), PROB_CLIP, 1.0)
    loss = float(-np.mean(np.log(p_true)))
    return loss, (probs - targets) / batch


def mse_loss(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error and its gradient wrt `pred`."""
    pred = np.asarray(pred, dtype=DTYPE)
    target = np.asarray(target, dtype=DTYPE)
    if pred.shape != target.shape:
        raise ShapeError(f"pred {pred.shape} and target {target.shape} differ")
    diff = pred - target
    return float(np.mean(diff * diff)), 2.0 * diff / diff.size


def binary_crossentropy(p: np.ndarray, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean binary cross-entropy and the combined sigmoid+BCE logit gradient."""
    p = np.asarray(p, dtype=DTYPE)
    y = np.asarray(y, dtype=DTYPE)
    if p.shape != y.shape:
        raise ShapeError(f"p {p.shape} and y {y.shape} differ")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ShapeError("binary labels must be 0 or 1")
    clipped = np.clip(p, PROB_CLIP, 1.0 - PROB_CLIP)
    loss = -np.mean(y * np.log(clipped) + (1.0 - y) * np.log(1.0 - clipped))
    return float(loss), (p - y) / p.size
