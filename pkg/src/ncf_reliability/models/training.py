"""Mini-batch training loop."""

import logging
import time
from typing import Optional

import numpy as np

from ..base.model import BaseModel
from ..base.records import ITEM, RATING, USER, EpochStats, SplitDataset, TrainHistory
from ..config import TrainConfig
from ..engine.optim import Adam
from ..exceptions import EmptyDatasetError

logger = logging.getLogger(__name__)

EVAL_BATCH = 4096


def train_epoch(
    model: BaseModel,
    train: np.ndarray,
    cfg: TrainConfig,
    optimizer: Adam,
    rng: np.random.Generator,
) -> float:
    """One pass over `train`; returns the mean per-sample loss."""
    n = len(train)
    if n == 0:
        raise EmptyDatasetError()

    order = rng.permutation(n) if cfg.shuffle else np.arange(n)
    total = 0.0
    steps = 0
    for start in range(0, n, cfg.batch_size):
        batch = train[order[start:start + cfg.batch_size]]
        output = model.forward(batch[:, USER], batch[:, ITEM], training=True)
        loss, grad = model.loss(output, batch[:, RATING])
        model.backward(grad)
        optimizer.step()
        total += loss * len(batch)
        steps += 1
    logger.debug(f"{model.kind}: {steps} optimizer steps")
    return total / n


def evaluate_loss(model: BaseModel, data: np.ndarray) -> tuple[float, float]:
    """Inference-mode (loss, metric) over `data`."""
    outputs = []
    for start in range(0, len(data), EVAL_BATCH):
        batch = data[start:start + EVAL_BATCH]
        outputs.append(model.forward(batch[:, USER], batch[:, ITEM], training=False))
    output = np.concatenate(outputs, axis=0)
    loss, _ = model.loss(output, data[:, RATING])
    return loss, model.test_metric(output, data[:, RATING])


def fit(model: BaseModel, dataset: SplitDataset, cfg: TrainConfig,
        optimizer: Optional[Adam] = None) -> TrainHistory:
    """Run cfg.epochs epochs, scoring the test partition after each."""
    optimizer = optimizer or Adam(model.parameters(), model.adam)
    history = TrainHistory(kind=model.kind, metric_name=model.metric_name)

    for epoch in range(1, cfg.epochs + 1):
        started = time.perf_counter()
        train_loss = train_epoch(model, dataset.train, cfg, optimizer, model.rngs.shuffle)
        test_loss = test_metric = None
        if len(dataset.test):
            test_loss, test_metric = evaluate_loss(model, dataset.test)
        seconds = time.perf_counter() - started
        history.epochs.append(EpochStats(epoch, train_loss, test_loss, test_metric, seconds))
        scored = "" if test_loss is None else (
            f" test_loss={test_loss:.4f} {model.metric_name}={test_metric:.4f}"
        )
        logger.info(
            f"{model.kind} epoch {epoch}/{cfg.epochs}: train_loss={train_loss:.4f}{scored} "
            f"({seconds:.1f}s)"
        )
    return history


def marginal_crossentropy(train_ratings: np.ndarray, test_ratings: np.ndarray, v_max: int) -> float:
    """Test cross-entropy of always predicting the train rating distribution."""
    counts = np.bincount(np.asarray(train_ratings) - 1, minlength=v_max).astype(np.float64)
    marginal = np.clip(counts / counts.sum(), 1e-12, 1.0)
    return float(-np.mean(np.log(marginal[np.asarray(test_ratings) - 1])))
