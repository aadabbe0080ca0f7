"""Run-directory orchestration shared by the CLI commands."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .base.model import BaseModel
from .base.records import ITEM, USER, DatasetIndex, RatingRecord, SplitDataset, TrainHistory
from .config import RunConfig
from .dataset import build_index, load_ratings, split, write_split_dump
from .engine.rng import fold_seeds
from .exceptions import CheckpointError, ConfigurationError
from .models import build_model, fit
from .models.diagnostics import check_model_gradients
from .models.persistence import checkpoint_name, load_model, save_model, write_training_log

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunLayout:
    """Paths inside one run directory; folds other than 0 get their own subdirectories."""

    root: Path
    fold: int = 0

    def _per_fold(self, name: str) -> Path:
        return self.root / name if self.fold == 0 else self.root / name / f"fold{self.fold}"

    @property
    def config(self) -> Path:
        return self.root / "config"

    @property
    def checkpoints(self) -> Path:
        return self._per_fold("checkpoints")

    @property
    def logs(self) -> Path:
        return self._per_fold("logs")

    @property
    def metrics(self) -> Path:
        return self._per_fold("metrics")

    def split(self, fold: int = 0) -> Path:
        return self.root / ("split.csv" if fold == 0 else f"split_fold{fold}.csv")

    def checkpoint(self, kind: str, theta: Optional[int] = None) -> Path:
        return self.checkpoints / checkpoint_name(kind, theta)

    def training_log(self, kind: str, theta: Optional[int] = None) -> Path:
        return self.logs / checkpoint_name(kind, theta).replace(".npz", ".csv")


@dataclass
class PreparedData:
    """Loaded records, their index and the split of the selected fold."""

    records: list[RatingRecord]
    index: DatasetIndex
    dataset: SplitDataset


@dataclass(frozen=True)
class TrainJob:
    kind: str
    theta: Optional[int] = None

    @property
    def label(self) -> str:
        return self.kind if self.theta is None else f"{self.kind}(theta={self.theta})"


def prepare_dataset(config: RunConfig, fold: Optional[int] = None) -> PreparedData:
    """Load, index and split the configured rating file."""
    records = load_ratings(config.data, config.fmt, config.score_range)
    index = build_index(records, config.v_max)
    fold = config.fold if fold is None else fold
    seed = fold_seeds(config.seed, config.folds)[fold]
    return PreparedData(records, index, split(records, index, config.train_ratio, seed))


def write_split_dumps(config: RunConfig, prepared: PreparedData, layout: RunLayout) -> list[Path]:
    """One canonical dump per fold; fold 0 goes to `split.csv`."""
    paths = []
    seeds = fold_seeds(config.seed, config.folds)
    for fold, seed in enumerate(seeds):
        if fold == config.fold:
            dataset = prepared.dataset
        else:
            dataset = split(prepared.records, prepared.index, config.train_ratio, seed)
        paths.append(write_split_dump(dataset, layout.split(fold)))
    return paths


def train_jobs(config: RunConfig) -> list[TrainJob]:
    """Binary models are trained once per relevancy threshold."""
    jobs = []
    for kind in config.models:
        if kind == "binary":
            jobs.extend(TrainJob(kind, theta) for theta in config.eval.theta_values)
        else:
            jobs.append(TrainJob(kind))
    return jobs


def _train_one(job: TrainJob, config: RunConfig, prepared: PreparedData,
               layout: RunLayout) -> tuple[BaseModel, TrainHistory]:
    index, dataset = prepared.index, prepared.dataset
    model = build_model(job.kind, index.num_users, index.num_items, config.v_max, config.train,
                        theta=job.theta, train=dataset.train)
    logger.info(f"Training {job.label}: {model.parameter_count} parameters")
    history = fit(model, dataset, config.train)
    save_model(model, layout.checkpoint(job.kind, job.theta))
    write_training_log(history, layout.training_log(job.kind, job.theta))
    return model, history


def train_models(config: RunConfig, prepared: PreparedData,
                 layout: RunLayout) -> list[tuple[TrainJob, BaseModel, TrainHistory]]:
    """Train every configured job; results keep job order whatever `workers` is."""
    jobs = train_jobs(config)
    if config.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_train_one, job, config, prepared, layout) for job in jobs]
            results = [future.result() for future in futures]
    else:
        results = [_train_one(job, config, prepared, layout) for job in jobs]
    return [(job, model, history) for job, (model, history) in zip(jobs, results)]


def load_trained_models(config: RunConfig, layout: RunLayout,
                        index: Optional[DatasetIndex] = None) -> list[BaseModel]:
    """Load the checkpoint of every configured job."""
    models = []
    for job in train_jobs(config):
        path = layout.checkpoint(job.kind, job.theta)
        if not path.exists():
            raise CheckpointError(f"missing checkpoint for model {job.label}: {path}")
        model = load_model(path)
        if index is not None and (model.num_users, model.num_items) != (index.num_users,
                                                                         index.num_items):
            raise CheckpointError(
                f"{path}: trained on {model.num_users} users / {model.num_items} items, "
                f"dataset has {index.num_users} / {index.num_items}"
            )
        models.append(model)
    return models


def candidate_items(dataset: SplitDataset, user_idx: int, num_items: int, pool: str) -> np.ndarray:
    """Items a user can be recommended: held-out ones or everything unrated in train."""
    if pool == "test":
        return np.sort(dataset.test[dataset.test[:, USER] == user_idx, ITEM])
    if pool == "unrated":
        rated = dataset.train[dataset.train[:, USER] == user_idx, ITEM]
        return np.setdiff1d(np.arange(num_items, dtype=np.int64), rated)
    raise ConfigurationError(f"Unknown candidate pool: {pool}")


def gradient_report(config: RunConfig, num_users: int = 6, num_items: int = 7,
                    batch: int = 4) -> dict[str, float]:
    """Max relative gradient error of each configured architecture on a random batch."""
    rng = np.random.default_rng(config.seed)
    users = rng.integers(0, num_users, size=batch)
    items = rng.integers(0, num_items, size=batch)
    ratings = rng.integers(1, config.v_max + 1, size=batch)
    # Dense train matrix: an all-zero DeepMF input row would sit exactly on a relu kink.
    grid_users, grid_items = np.meshgrid(np.arange(num_users), np.arange(num_items), indexing="ij")
    train = np.column_stack([
        grid_users.reshape(-1),
        grid_items.reshape(-1),
        rng.integers(1, config.v_max + 1, size=num_users * num_items),
    ])

    report: dict[str, float] = {}
    for job in train_jobs(config):
        model = build_model(job.kind, num_users, num_items, config.v_max, config.train,
                            theta=job.theta, train=train)
        report[job.label] = check_model_gradients(model, users, items, ratings, rng=rng)
    return report
