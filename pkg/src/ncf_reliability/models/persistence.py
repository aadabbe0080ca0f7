"""Model checkpoints and training logs."""

import logging
from dataclasses import asdict
from pathlib import Path
from typing import Optional

import pandas as pd

from ..base.model import BaseModel
from ..base.records import TrainHistory
from ..config import TrainConfig
from ..engine.checkpoint import load_tensors, read_meta, save_tensors
from ..exceptions import CheckpointError

logger = logging.getLogger(__name__)

LOG_COLUMNS = ["epoch", "train_loss", "test_loss", "test_metric", "seconds"]


def checkpoint_name(kind: str, theta: Optional[int] = None) -> str:
    """File name of a model checkpoint; binary models are keyed by theta."""
    if kind == "binary":
        return f"binary_theta{theta}.npz"
    return f"{kind}.npz"


def save_model(model: BaseModel, path: Path) -> Path:
    meta = model.checkpoint_meta()
    meta["train_config"] = asdict(model.cfg)
    return save_tensors(path, model.parameters(), meta, model.buffers())


def load_model(path: Path) -> BaseModel:
    """Rebuild the topology from the metadata, then restore every tensor."""
    from . import build_model

    meta = read_meta(path)
    try:
        cfg = TrainConfig(**meta["train_config"])
        model = build_model(
            meta["kind"], meta["num_users"], meta["num_items"], meta["v_max"], cfg,
            theta=meta.get("theta"),
        )
    except (KeyError, TypeError) as e:
        raise CheckpointError(f"{path}: malformed metadata ({e})") from e

    buffers = load_tensors(path, model.parameters())
    if "interactions" in buffers:
        model.interactions = buffers["interactions"]
    model.adam.t = int(meta.get("adam_t", 0))
    return model


def write_training_log(history: TrainHistory, path: Path) -> Path:
    """`epoch,train_loss,test_loss,test_metric,seconds`, one line per epoch."""
    frame = pd.DataFrame(
        [(e.epoch, e.train_loss, e.test_loss, e.test_metric, e.seconds) for e in history.epochs],
        columns=LOG_COLUMNS,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote training log: {path}")
    return path
