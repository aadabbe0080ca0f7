"""Model architectures and their builder registry."""

from typing import Optional

import numpy as np

from ..base.model import BaseModel
from ..config import TrainConfig
from ..exceptions import ConfigurationError
from .binary import BinaryModel, build_binary
from .classification import ClassificationModel, build_classification
from .deepmf import DeepMFModel, build_deepmf
from .regression import RegressionModel, build_regression
from .training import fit, marginal_crossentropy, train_epoch


def build_model(
    kind: str,
    num_users: int,
    num_items: int,
    v_max: int,
    cfg: TrainConfig,
    theta: Optional[int] = None,
    train: Optional[np.ndarray] = None,
) -> BaseModel:
    """Build any architecture by kind."""
    if kind == "classification":
        return build_classification(num_users, num_items, v_max, cfg)
    elif kind == "regression":
        return build_regression(num_users, num_items, cfg, v_max=v_max)
    elif kind == "binary":
        if theta is None:
            raise ConfigurationError("binary model requires a relevancy threshold theta")
        return build_binary(num_users, num_items, theta, cfg, v_max=v_max)
    elif kind == "deepmf":
        return build_deepmf(num_users, num_items, cfg, train=train, v_max=v_max)
    else:
        raise ConfigurationError(
            f"Unknown model kind: {kind}. "
            f"Supported kinds: classification, regression, binary, deepmf"
        )


def predict(model: BaseModel, users: np.ndarray, items: np.ndarray) -> np.ndarray:
    """Inference-mode output (distribution, clamped score or probability)."""
    return model.predict(users, items)


__all__ = [
    "BinaryModel",
    "ClassificationModel",
    "DeepMFModel",
    "RegressionModel",
    "build_binary",
    "build_classification",
    "build_deepmf",
    "build_model",
    "build_regression",
    "fit",
    "marginal_crossentropy",
    "predict",
    "train_epoch",
]
