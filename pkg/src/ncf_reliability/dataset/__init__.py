"""Rating ingestion, indexing and splitting."""

from pathlib import Path

from ..base.records import RatingRecord
from ..exceptions import ConfigurationError
from .indexing import (
    Relevance,
    binarize,
    binarize_array,
    build_index,
    encode_records,
    one_hot,
    one_hot_matrix,
    rating_matrix,
    sparsity,
    split,
    write_split_dump,
)
from .loaders import CsvLoader, MovieLens1MLoader, MovieLens100KLoader, RatingFileLoader

LOADERS: dict[str, type[RatingFileLoader]] = {
    "ml100k": MovieLens100KLoader,
    "ml1m": MovieLens1MLoader,
    "csv": CsvLoader,
}


def get_loader(fmt: str, score_range: tuple[int, int]) -> RatingFileLoader:
    """Get the loader for a file format."""
    loader_class = LOADERS.get(fmt)
    if loader_class is None:
        raise ConfigurationError(
            f"Unknown format: {fmt}. Supported formats: {', '.join(LOADERS)}"
        )
    return loader_class(score_range)


def load_ratings(path: Path, fmt: str, score_range: tuple[int, int]) -> list[RatingRecord]:
    """Read every record of a rating file (fail-fast on the first bad line)."""
    return get_loader(fmt, score_range).load(Path(path))


__all__ = [
    "LOADERS",
    "Relevance",
    "binarize",
    "binarize_array",
    "build_index",
    "encode_records",
    "get_loader",
    "load_ratings",
    "one_hot",
    "one_hot_matrix",
    "rating_matrix",
    "sparsity",
    "split",
    "write_split_dump",
]
