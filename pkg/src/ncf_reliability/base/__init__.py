"""Shared records and abstract base classes.

`BaseModel` lives in `base.model` and is imported from there; it depends on
the engine layers, which themselves build on `BaseLayer`.
"""

from .layer import BaseLayer
from .records import (
    ITEM,
    RATING,
    USER,
    ClassDistribution,
    DatasetIndex,
    EpochStats,
    MetricsReport,
    MetricValue,
    PredictionPair,
    RatingRecord,
    ScoredCandidate,
    SplitDataset,
    TrainHistory,
)

__all__ = [
    "BaseLayer",
    "USER",
    "ITEM",
    "RATING",
    "RatingRecord",
    "DatasetIndex",
    "SplitDataset",
    "ClassDistribution",
    "PredictionPair",
    "ScoredCandidate",
    "EpochStats",
    "TrainHistory",
    "MetricValue",
    "MetricsReport",
]
