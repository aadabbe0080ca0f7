"""Index remapping, splitting and label encoding."""

import logging
from enum import IntEnum
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from ..base.records import ITEM, RATING, USER, DatasetIndex, RatingRecord, SplitDataset
from ..exceptions import EmptyDatasetError, ShapeError

logger = logging.getLogger(__name__)


class Relevance(IntEnum):
    NOT_RELEVANT = 0
    RELEVANT = 1


def build_index(records: Sequence[RatingRecord], v_max: int) -> DatasetIndex:
    """Dense ids in order of first appearance."""
    if not records:
        raise EmptyDatasetError()

    user_map: dict[int, int] = {}
    item_map: dict[int, int] = {}
    pairs: set[tuple[int, int]] = set()
    for record in records:
        user_map.setdefault(record.user_raw, len(user_map))
        item_map.setdefault(record.item_raw, len(item_map))
        pairs.add((record.user_raw, record.item_raw))

    index = DatasetIndex(user_map=user_map, item_map=item_map, v_max=v_max,
                         num_ratings=len(pairs))
    logger.info(
        f"Indexed {index.num_users} users, {index.num_items} items, "
        f"{index.num_ratings} ratings"
    )
    return index


def sparsity(index: DatasetIndex) -> float:
    """Percentage of the user x item matrix without a rating."""
    if index.num_users < 1 or index.num_items < 1:
        raise EmptyDatasetError()
    return 100.0 * (1.0 - index.num_ratings / (index.num_users * index.num_items))


def encode_records(records: Sequence[RatingRecord], index: DatasetIndex) -> np.ndarray:
    """(n, 3) int64 array of (user_idx, item_idx, rating); re-votes keep the last one."""
    latest: dict[tuple[int, int], int] = {}
    for record in records:
        latest[(index.user_map[record.user_raw], index.item_map[record.item_raw])] = record.rating

    duplicates = len(records) - len(latest)
    if duplicates:
        logger.warning(f"Dropped {duplicates} duplicate (user, item) ratings, kept last occurrence")

    encoded = np.empty((len(latest), 3), dtype=np.int64)
    for row, ((user, item), rating) in enumerate(latest.items()):
        encoded[row] = (user, item, rating)
    return encoded


def split(
    records: Sequence[RatingRecord],
    index: DatasetIndex,
    train_ratio: float,
    seed: int,
) -> SplitDataset:
    """Seeded uniform holdout: floor train size, remainder test, at least one of each."""
    if not 0.0 < train_ratio < 1.0:
        raise ShapeError(f"train_ratio must be in (0, 1), got {train_ratio}")

    encoded = encode_records(records, index)
    n = len(encoded)
    if n < 2:
        n_train = n
        logger.warning("Fewer than 2 ratings: everything goes to train")
    else:
        n_train = min(max(int(np.floor(n * train_ratio + 1e-9)), 1), n - 1)

    order = np.random.default_rng(seed).permutation(n)
    train_rows = np.sort(order[:n_train])
    test_rows = np.sort(order[n_train:])

    result = SplitDataset(
        train=encoded[train_rows],
        test=encoded[test_rows],
        split_seed=seed,
        train_ratio=train_ratio,
    )
    counts = result.test_counts_per_user()
    logger.info(
        f"Split {n} ratings into {len(result.train)} train / {len(result.test)} test "
        f"(seed {seed}); {len(counts)} users hold test items"
    )
    logger.debug(f"Test items per user index: {counts}")
    return result


def one_hot(rating: int, v_max: int) -> np.ndarray:
    """Length-V vector with 1.0 at class rating - 1."""
    if not 1 <= rating <= v_max:
        raise ShapeError(f"rating {rating} outside [1, {v_max}]")
    vector = np.zeros(v_max, dtype=np.float64)
    vector[rating - 1] = 1.0
    return vector


def one_hot_matrix(ratings: np.ndarray, v_max: int) -> np.ndarray:
    """Batched one_hot."""
    ratings = np.asarray(ratings, dtype=np.int64).reshape(-1)
    if ratings.size and (ratings.min() < 1 or ratings.max() > v_max):
        raise ShapeError(f"ratings outside [1, {v_max}]")
    matrix = np.zeros((ratings.size, v_max), dtype=np.float64)
    matrix[np.arange(ratings.size), ratings - 1] = 1.0
    return matrix


def binarize(rating: int, theta: int) -> Relevance:
    """Relevant iff rating >= theta."""
    return Relevance.RELEVANT if rating >= theta else Relevance.NOT_RELEVANT


def binarize_array(ratings: np.ndarray, theta: int) -> np.ndarray:
    return (np.asarray(ratings) >= theta).astype(np.float64)


def rating_matrix(train: np.ndarray, num_users: int, num_items: int) -> np.ndarray:
    """Dense user x item matrix of train ratings, zeros where unrated."""
    matrix = np.zeros((num_users, num_items), dtype=np.float64)
    matrix[train[:, USER], train[:, ITEM]] = train[:, RATING]
    return matrix


def write_split_dump(dataset: SplitDataset, path: Path) -> Path:
    """Canonical `user_idx,item_idx,rating,partition` dump."""
    frames = []
    for partition, rows in (("train", dataset.train), ("test", dataset.test)):
        frame = pd.DataFrame(rows, columns=["user_idx", "item_idx", "rating"])
        frame["partition"] = partition
        frames.append(frame)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.concat(frames, ignore_index=True).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"Wrote split dump: {path}")
    return path
