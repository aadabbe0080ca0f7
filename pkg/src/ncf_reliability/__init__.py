"""NCF Reliability - classification-based neural collaborative filtering with prediction reliabilities."""

__version__ = "0.1.0"

SUPPORTED_MODELS = ["classification", "regression", "binary", "deepmf"]

SUPPORTED_FORMATS = ["ml100k", "ml1m", "csv"]
