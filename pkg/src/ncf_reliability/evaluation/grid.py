"""The full experiment grid over N, theta, beta and rating."""

import logging
from typing import Sequence

from ..base.model import BaseModel
from ..base.records import MetricsReport, SplitDataset
from ..config import EvalConfig
from .metrics import evaluate_per_rating, evaluate_precision_vs_coverage, evaluate_topn
from .scoring import TestPredictions, score_models

logger = logging.getLogger(__name__)


def run_experiment_grid(
    models: Sequence[BaseModel], dataset: SplitDataset, cfg: EvalConfig
) -> MetricsReport:
    """Score every model on the test partition, then fill the grid."""
    return grid_from_predictions(score_models(models, dataset), cfg)


def grid_from_predictions(predictions: Sequence[TestPredictions], cfg: EvalConfig) -> MetricsReport:
    """Binary predictions only fill the cells of the theta they were trained for."""
    report = MetricsReport()

    if "topn" in cfg.families:
        for n in cfg.n_values:
            for theta in cfg.theta_values:
                for preds in predictions:
                    if preds.theta is not None and preds.theta != theta:
                        continue
                    key = (n, theta, preds.method)
                    report.precision[key], report.recall[key] = evaluate_topn(
                        preds, n, theta, cfg.reliability_min
                    )
        logger.info(f"Filled {len(report.precision)} precision/recall cells")

    ranked = [p for p in predictions if p.kind != "binary" and p.method != "classification"]

    if "perrating" in cfg.families:
        for preds in ranked:
            for rating in range(1, preds.v_max + 1):
                report.per_rating[(rating, None, preds.method)] = evaluate_per_rating(preds, rating)
                for n in cfg.per_rating_n:
                    report.per_rating[(rating, n, preds.method)] = evaluate_per_rating(
                        preds, rating, n
                    )
        logger.info(f"Filled {len(report.per_rating)} per-rating cells")

    if "pvc" in cfg.families:
        for theta in cfg.theta_values:
            for beta in cfg.beta_values:
                for preds in predictions:
                    if preds.kind == "binary":
                        continue
                    report.pvc[(cfg.pvc_n, theta, beta, preds.method)] = (
                        evaluate_precision_vs_coverage(
                            preds, cfg.pvc_n, theta, beta, cfg.reliability_min
                        )
                    )
        logger.info(f"Filled {len(report.pvc)} precision-vs-coverage cells")

    absent = sum(v.absent for v in (*report.precision.values(), *report.recall.values(),
                                    *report.per_rating.values()))
    absent += sum(p.absent for p, _ in report.pvc.values())
    if absent:
        logger.warning(f"{absent} cells have no evaluable users and are reported as absent")
    return report
