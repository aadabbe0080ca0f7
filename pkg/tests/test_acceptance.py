"""End-to-end properties of trained runs, plus MovieLens 100K trends.

The MovieLens tests are marked slow and need NCF_ML100K_PATH pointing at u.data.
"""

from typing import Optional

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

from ncf_reliability.base.records import ITEM, RATING, USER
from ncf_reliability.cli import cli
from ncf_reliability.config import EvalConfig, RunConfig, TrainConfig, resolve_run_config
from ncf_reliability.dataset import build_index, load_ratings, sparsity, split
from ncf_reliability.evaluation import (
    METHODS,
    evaluate_precision_vs_coverage,
    evaluate_topn,
    score_test_set,
    user_outcomes,
)
from ncf_reliability.models import build_model, fit, marginal_crossentropy, predict
from ncf_reliability.pipeline import RunLayout, load_trained_models, prepare_dataset

from .test_evaluation import reference_per_rating, reference_rows, reference_topn

CSV_TOL = 1e-9


class TestNormalisation:
    """Softmax outputs over many random networks and inputs."""

    def test_rows_are_distributions(self):
        """10,000 forward passes all sum to 1 within 1e-9."""
        rng = np.random.default_rng(99)
        for seed in range(100):
            model = build_model("classification", 20, 30, 5, TrainConfig(seed=seed))
            for param in model.parameters():
                param.value *= rng.uniform(0.5, 20.0)
            output = model.predict(rng.integers(0, 20, size=100), rng.integers(0, 30, size=100))
            assert np.all(np.abs(output.sum(axis=1) - 1.0) <= 1e-9)
            assert np.all((output >= 0.0) & (output <= 1.0))


class TestDeterminism:
    """Identical run configs give identical artifacts."""

    def test_metrics_are_byte_identical(self, ratings_file, tmp_path):
        runner = CliRunner()
        flags = ["--data", str(ratings_file), "--epochs", "2", "--batch", "8", "--embed", "4",
                 "--hidden", "8,4", "--deepmf-layers", "8,4", "--model", "all"]
        for name in ("a", "b"):
            out = str(tmp_path / name)
            assert runner.invoke(cli, ["train", "--out", out, *flags]).exit_code == 0
            assert runner.invoke(cli, ["evaluate", "--out", out]).exit_code == 0
        for name in ("topn.csv", "perrating.csv", "pvc.csv", "metrics.csv"):
            assert (tmp_path / "a" / "metrics" / name).read_bytes() == \
                (tmp_path / "b" / "metrics" / name).read_bytes()


def metric_at(frame: pd.DataFrame, **key) -> Optional[float]:
    """The single CSV value at `key`; None keys match empty cells."""
    mask = np.ones(len(frame), dtype=bool)
    for column, value in key.items():
        if value is None:
            mask &= frame[column].isna().to_numpy()
        elif isinstance(value, str):
            mask &= (frame[column] == value).to_numpy()
        else:
            mask &= np.isclose(frame[column].to_numpy(dtype=np.float64), value)
    matched = frame[mask]
    assert len(matched) == 1, key
    value = matched["value"].iloc[0]
    return None if pd.isna(value) else float(value)


def assert_matches(got: Optional[float], expected: Optional[float]) -> None:
    if expected is None:
        assert got is None
    else:
        assert got == pytest.approx(expected, abs=CSV_TOL)


class TestEvaluateCsv:
    """The written metrics agree with an exhaustive recomputation from the checkpoints."""

    @pytest.fixture
    def run(self, ratings_file, tmp_path):
        runner = CliRunner()
        out = tmp_path / "run"
        flags = ["--data", str(ratings_file), "--out", str(out), "--epochs", "1", "--batch", "8",
                 "--embed", "4", "--hidden", "8,4", "--deepmf-layers", "8,4", "--seed", "7",
                 "--model", "all"]
        result = runner.invoke(cli, ["train", *flags])
        assert result.exit_code == 0, result.output
        result = runner.invoke(cli, ["evaluate", "--out", str(out)])
        assert result.exit_code == 0, result.output

        config = resolve_run_config(out / "config")
        prepared = prepare_dataset(config)
        models = load_trained_models(config, RunLayout(config.output_dir, config.fold),
                                     prepared.index)
        test = prepared.dataset.test
        scored = []
        for model in models:
            output = predict(model, test[:, USER], test[:, ITEM])
            for method, kind in METHODS.items():
                if kind == model.kind:
                    rows = reference_rows(test[:, USER], test[:, ITEM], test[:, RATING],
                                          output, method)
                    scored.append((method, model.theta, rows))
        return out / "metrics", config.eval, scored

    def test_row_counts(self, run):
        """4 methods x 15 cells plus binary at its own theta, two value kinds each."""
        metrics, _, _ = run
        assert len(pd.read_csv(metrics / "topn.csv")) == (4 * 5 * 3 + 3 * 5) * 2
        assert len(pd.read_csv(metrics / "perrating.csv")) == 3 * 5 * 4
        assert len(pd.read_csv(metrics / "pvc.csv")) == 4 * 3 * 5 * 2

    def test_topn_values(self, run):
        metrics, cfg, scored = run
        topn = pd.read_csv(metrics / "topn.csv")
        for method, own_theta, rows in scored:
            for n in cfg.n_values:
                for theta in cfg.theta_values:
                    if own_theta is not None and theta != own_theta:
                        continue
                    precision, recall, _ = reference_topn(rows, method, n, theta)
                    cell = {"model": method, "N": n, "theta": theta}
                    assert_matches(metric_at(topn, value_kind="precision", **cell), precision)
                    assert_matches(metric_at(topn, value_kind="recall", **cell), recall)

    def test_per_rating_values(self, run):
        metrics, cfg, scored = run
        per_rating = pd.read_csv(metrics / "perrating.csv")
        for method, _, rows in scored:
            if method not in ("proposed", "regression", "deepmf"):
                continue
            for rating in range(1, 6):
                assert_matches(metric_at(per_rating, model=method, rating=rating, N=None),
                               reference_per_rating(rows, rating))
                for n in cfg.per_rating_n:
                    assert_matches(metric_at(per_rating, model=method, rating=rating, N=n),
                                   reference_per_rating(rows, rating, n))

    def test_precision_vs_coverage_values(self, run):
        metrics, cfg, scored = run
        pvc = pd.read_csv(metrics / "pvc.csv")
        for method, _, rows in scored:
            if method == "binary":
                continue
            for theta in cfg.theta_values:
                for beta in cfg.beta_values:
                    precision, _, coverage = reference_topn(rows, method, cfg.pvc_n, theta, beta)
                    cell = {"model": method, "N": cfg.pvc_n, "theta": theta, "beta": beta}
                    assert_matches(metric_at(pvc, value_kind="precision", **cell), precision)
                    assert_matches(metric_at(pvc, value_kind="coverage", **cell), coverage)


@pytest.fixture(scope="module")
def ml100k(ml100k_path):
    records = load_ratings(ml100k_path, "ml100k", (1, 5))
    index = build_index(records, 5)
    return records, index, split(records, index, 0.8, RunConfig().seed)


@pytest.fixture(scope="module")
def trained_classification(ml100k):
    _, index, dataset = ml100k
    model = build_model("classification", index.num_users, index.num_items, 5, TrainConfig())
    history = fit(model, dataset, TrainConfig())
    return model, history


@pytest.mark.slow
class TestMovieLens100K:
    """Dataset statistics and learning trends on MovieLens 100K."""

    def test_statistics(self, ml100k):
        """943 users, 1682 items, about 93.7% empty."""
        _, index, _ = ml100k
        assert (index.num_users, index.num_items) == (943, 1682)
        assert abs(sparsity(index) - 93.71) <= 0.05

    def test_beats_marginal_predictor(self, ml100k, trained_classification):
        """Test cross-entropy at least 0.05 nats below the rating-marginal predictor."""
        _, _, dataset = ml100k
        _, history = trained_classification
        baseline = marginal_crossentropy(dataset.train[:, RATING], dataset.test[:, RATING], 5)
        assert history.epochs[-1].test_loss <= baseline - 0.05

    def test_n_sweep(self, ml100k, trained_classification):
        """Precision falls and recall grows with N, with at most one small inversion."""
        _, _, dataset = ml100k
        model, _ = trained_classification
        predictions = score_test_set(model, dataset, "proposed")
        cfg = EvalConfig()
        values = [evaluate_topn(predictions, n, 4) for n in range(2, 11)]
        precision = [p.value for p, _ in values]
        recall = [r.value for _, r in values]

        def inversions(series, sign):
            steps = [sign * (b - a) for a, b in zip(series, series[1:])]
            bad = [s for s in steps if s > 0]
            return len(bad), max(bad, default=0.0)

        count, size = inversions(precision, 1.0)
        assert count <= 1 and size < 0.01
        count, size = inversions(recall, -1.0)
        assert count <= 1 and size < 0.01

        previous = user_outcomes(predictions, cfg.n_values[0], 4)
        for n in cfg.n_values[1:]:
            current = user_outcomes(predictions, n, 4)
            assert all(current[u].hits >= previous[u].hits for u in current)
            previous = current

    def test_beta_sweep(self, ml100k, trained_classification):
        """Coverage shrinks with beta while precision does not drop."""
        _, _, dataset = ml100k
        model, _ = trained_classification
        predictions = score_test_set(model, dataset, "proposed")
        curve = [evaluate_precision_vs_coverage(predictions, 10, 4, beta)
                 for beta in EvalConfig().beta_values]
        coverage = [c.value for _, c in curve]
        assert coverage == sorted(coverage, reverse=True)
        low, high = curve[0][0], curve[-1][0]
        if not high.absent:
            assert high.value >= low.value
