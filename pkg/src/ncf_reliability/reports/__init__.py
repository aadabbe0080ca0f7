"""Output writers for experiment results."""

from .csv import MetricsCsvWriter, metrics_frame, write_recommendations

__all__ = ["MetricsCsvWriter", "metrics_frame", "write_recommendations"]
