"""Shared fixtures: tiny rating files, splits and small model configs."""

import os
from pathlib import Path

import numpy as np
import pytest

from ncf_reliability.base.records import RatingRecord
from ncf_reliability.config import TrainConfig
from ncf_reliability.dataset import build_index, split


def toy_records() -> list[RatingRecord]:
    """6 users x 8 items with a deterministic rating pattern and some gaps."""
    records = []
    for user in range(1, 7):
        for item in range(1, 9):
            if (user + item) % 3 == 0:
                continue
            rating = 1 + (user * item + item) % 5
            records.append(RatingRecord(user_raw=user * 10, item_raw=item * 100, rating=rating,
                                        timestamp=880000000 + user * item))
    return records


def write_ml100k(path: Path, records: list[RatingRecord]) -> Path:
    lines = [f"{r.user_raw}\t{r.item_raw}\t{r.rating}\t{r.timestamp}" for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="latin-1")
    return path


@pytest.fixture
def records() -> list[RatingRecord]:
    return toy_records()


@pytest.fixture
def ratings_file(tmp_path: Path, records: list[RatingRecord]) -> Path:
    """The toy records as a MovieLens 100K style file."""
    return write_ml100k(tmp_path / "u.data", records)


@pytest.fixture
def index(records):
    return build_index(records, v_max=5)


@pytest.fixture
def toy_split(records, index):
    return split(records, index, train_ratio=0.8, seed=42)


@pytest.fixture
def small_config() -> TrainConfig:
    """Scaled-down architecture that trains in milliseconds."""
    return TrainConfig(epochs=2, batch_size=8, learning_rate=0.01, embed_dim=4, hidden=[8, 4],
                       dropout=0.2, seed=7, deepmf_layers=[8, 4])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ml100k_path() -> Path:
    """MovieLens 100K u.data from NCF_ML100K_PATH; skips when unset."""
    value = os.environ.get("NCF_ML100K_PATH")
    if not value or not Path(value).exists():
        pytest.skip("NCF_ML100K_PATH not set")
    return Path(value)
