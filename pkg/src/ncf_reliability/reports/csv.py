"""CSV writers for metrics and recommendation lists."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from ..base.records import MetricsReport, MetricValue, ScoredCandidate
from ..config import SUPPORTED_FAMILIES

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ["family", "model", "N", "theta", "beta", "rating",
                  "value_kind", "value", "denominator"]
RECOMMENDATION_COLUMNS = ["user_idx", "rank", "item_idx", "rating", "reliability"]

_DTYPES = {
    "family": "string", "model": "string", "N": "Int64", "theta": "Int64",
    "beta": "Float64", "rating": "Int64", "value_kind": "string",
    "value": "Float64", "denominator": "Int64",
}


class MetricsCsvWriter:
    """Writes one CSV per experiment family plus a combined file."""

    def __init__(self, output_dir: Path, dry_run: bool = False):
        self.output_dir = Path(output_dir)
        self.dry_run = dry_run

    def generate(self, report: MetricsReport, families: Sequence[str] = SUPPORTED_FAMILIES) -> list[Path]:
        """Write the requested families, plus `metrics.csv` when there is more than one."""
        builders = {
            "topn": self._topn_rows,
            "perrating": self._per_rating_rows,
            "pvc": self._pvc_rows,
        }
        self.output_dir.mkdir(parents=True, exist_ok=True)
        created: list[Path] = []
        combined: list[dict] = []
        for family in SUPPORTED_FAMILIES:
            if family not in families:
                continue
            rows = builders[family](report)
            combined.extend(rows)
            created.append(self._write(self.output_dir / f"{family}.csv", rows))
        if len([f for f in SUPPORTED_FAMILIES if f in families]) > 1:
            created.append(self._write(self.output_dir / "metrics.csv", combined))
        return created

    def _write(self, path: Path, rows: list[dict]) -> Path:
        frame = metrics_frame(rows)
        if self.dry_run:
            logger.info(f"[DRY RUN] Would write: {path}")
        else:
            frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
            logger.debug(f"Wrote: {path} ({len(frame)} rows)")
        return path

    def _topn_rows(self, report: MetricsReport) -> list[dict]:
        rows = []
        for (n, theta, method), precision in report.precision.items():
            recall = report.recall[(n, theta, method)]
            rows.append(_row("topn", method, "precision", precision, n=n, theta=theta))
            rows.append(_row("topn", method, "recall", recall, n=n, theta=theta))
        return rows

    def _per_rating_rows(self, report: MetricsReport) -> list[dict]:
        return [
            _row("perrating", method, "precision", value, n=n, rating=rating)
            for (rating, n, method), value in report.per_rating.items()
        ]

    def _pvc_rows(self, report: MetricsReport) -> list[dict]:
        rows = []
        for (n, theta, beta, method), (precision, coverage) in report.pvc.items():
            rows.append(_row("pvc", method, "precision", precision, n=n, theta=theta, beta=beta))
            rows.append(_row("pvc", method, "coverage", coverage, n=n, theta=theta, beta=beta))
        return rows


def _row(
    family: str,
    method: str,
    value_kind: str,
    metric: MetricValue,
    n: Optional[int] = None,
    theta: Optional[int] = None,
    beta: Optional[float] = None,
    rating: Optional[int] = None,
) -> dict:
    return {
        "family": family, "model": method, "N": n, "theta": theta, "beta": beta,
        "rating": rating, "value_kind": value_kind, "value": metric.value,
        "denominator": metric.denominator,
    }


def metrics_frame(rows: list[dict]) -> pd.DataFrame:
    """Rows in the fixed column order; missing cells stay empty, never 0."""
    frame = pd.DataFrame(rows, columns=METRIC_COLUMNS)
    return frame.astype(_DTYPES)


def write_recommendations(
    rows: Sequence[tuple[int, Sequence[ScoredCandidate]]], path: Path
) -> Path:
    """`user_idx,rank,item_idx,rating,reliability`; reliability empty for score-based models."""
    records = []
    for user_idx, recommended in rows:
        for rank, candidate in enumerate(recommended, start=1):
            if candidate.pair is not None:
                rating, reliability = candidate.pair.rating, candidate.pair.reliability
            else:
                rating, reliability = candidate.score, None
            records.append((user_idx, rank, candidate.item_idx, rating, reliability))
    frame = pd.DataFrame(records, columns=RECOMMENDATION_COLUMNS).astype(
        {"user_idx": "Int64", "rank": "Int64", "item_idx": "Int64", "reliability": "Float64"}
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
    logger.info(f"Wrote recommendations: {path}")
    return path
