"""Click CLI interface for ncf-reliability."""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click
import numpy as np

from . import SUPPORTED_FORMATS, __version__
from .config import PRESETS, RunConfig, resolve_run_config
from .dataset import sparsity
from .evaluation import run_experiment_grid
from .exceptions import (
    CheckpointError,
    ConfigurationError,
    DatasetError,
    NCFReliabilityError,
)
from .models import predict
from .models.persistence import load_model
from .pipeline import (
    RunLayout,
    candidate_items,
    gradient_report,
    load_trained_models,
    prepare_dataset,
    train_models,
    write_split_dumps,
)
from .reliability import DEFAULT_RELIABILITY_MIN, candidates_from_output, recommend_classification
from .reports import MetricsCsvWriter, write_recommendations

logger = logging.getLogger(__name__)

GRADCHECK_TOLERANCE = 1e-4


def setup_logging(verbosity: int) -> None:
    """Configure logging based on verbosity level."""
    if verbosity == 0:
        level = logging.WARNING
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.DEBUG

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        force=True,
    )


def handle_errors(func: Callable[..., None]) -> Callable[..., None]:
    """Map library exceptions to a one-line stderr message and exit status 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            func(*args, **kwargs)
        except ConfigurationError as e:
            click.echo(f"Configuration error: {e}", err=True)
            sys.exit(1)
        except DatasetError as e:
            click.echo(f"Dataset error: {e}", err=True)
            sys.exit(1)
        except CheckpointError as e:
            click.echo(f"Checkpoint error: {e}", err=True)
            sys.exit(1)
        except NCFReliabilityError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(1)
        except Exception as e:
            logger.exception("Unexpected error")
            click.echo(f"Unexpected error: {e}", err=True)
            sys.exit(1)

    return wrapper


def add_options(options: list[Callable]) -> Callable:
    def decorate(func: Callable) -> Callable:
        for option in reversed(options):
            func = option(func)
        return func

    return decorate


# Every option defaults to None so that only flags given on the command line
# override the run's config file.
RUN_OPTIONS = [
    click.option("--config", "config_file", type=click.Path(dir_okay=False, path_type=Path),
                 help="Config file (default: <out>/config when present)"),
    click.option("--data", type=click.Path(), help="Rating file"),
    click.option("--format", type=click.Choice(SUPPORTED_FORMATS, case_sensitive=False),
                 help="Rating file format"),
    click.option("--scores", help="Score range, e.g. 1:5"),
    click.option("--preset", type=click.Choice(sorted(PRESETS)), help="Dataset preset"),
    click.option("--seed", type=int, help="Global seed"),
    click.option("--train-ratio", type=float, help="Train fraction of the holdout split"),
    click.option("--folds", type=int, help="Number of repeated-holdout folds"),
    click.option("--fold", type=int, help="Fold to train/evaluate on"),
    click.option("--out", type=click.Path(), help="Run directory"),
]

MODEL_OPTIONS = [
    click.option("--model", help="classification, regression, binary, deepmf or all (comma list)"),
]

TRAIN_OPTIONS = [
    click.option("--epochs", type=int, help="Training epochs"),
    click.option("--batch", type=int, help="Mini-batch size"),
    click.option("--lr", type=float, help="Adam learning rate"),
    click.option("--embed", type=int, help="Embedding size F"),
    click.option("--hidden", help="Hidden layer sizes, e.g. 80,25"),
    click.option("--dropout", type=float, help="Dropout rate"),
    click.option("--deepmf-layers", help="DeepMF tower sizes, e.g. 128,64"),
    click.option("--regression-trunk", type=click.Choice(["dot", "mlp"]),
                 help="Regression baseline merge"),
    click.option("--init", type=click.Choice(["glorot", "zeros"]), help="Weight initialisation"),
    click.option("--workers", type=int, help="Models trained in parallel"),
]

EVAL_OPTIONS = [
    click.option("--n", help="Recommendation list sizes, e.g. 2,4,6,8,10"),
    click.option("--theta", help="Relevancy thresholds, e.g. 3,4,5"),
    click.option("--beta", help="Beta thresholds, e.g. 4,4.2,4.4"),
    click.option("--per-rating-n", help="List sizes of the top-N per-rating variant"),
    click.option("--pvc-n", type=int, help="List size of the precision-vs-coverage family"),
    click.option("--reliability-min", type=float, help="Minimum reliability of the proposed method"),
    click.option("--family", help="topn, perrating, pvc or all (comma list)"),
]

VERBOSE_OPTION = click.option("-v", "--verbose", count=True,
                              help="Increase verbosity (-v info, -vv debug)")


def load_run_config(config_file: Optional[Path], overrides: dict[str, Any],
                    require_data: bool = True) -> RunConfig:
    """Defaults < preset < config file < flags; the run's own config is found via --out."""
    if config_file is None:
        out = overrides.get("out") or RunConfig().output_dir
        candidate = RunLayout(Path(out)).config
        if candidate.exists():
            config_file = candidate
    elif not config_file.exists():
        raise ConfigurationError(f"Config file not found: {config_file}")

    config = resolve_run_config(config_file, overrides)
    if require_data:
        config.validate()
    else:
        config.train.validate()
        config.eval.validate(config.v_max)
    return config


@click.group()
@click.version_option(version=__version__)
def cli():
    """NCF Reliability - neural collaborative filtering with prediction reliabilities.

    Trains the classification NCF and its baselines (regression, binary,
    DeepMF) and runs the recommendation-quality experiment grid.
    """
    pass


@cli.command()
@add_options(RUN_OPTIONS)
@VERBOSE_OPTION
@handle_errors
def ingest(config_file: Optional[Path], verbose: int, **overrides: Any) -> None:
    """Load a rating file, print its statistics and dump the train/test split."""
    setup_logging(verbose)
    config = load_run_config(config_file, overrides)
    layout = RunLayout(config.output_dir, config.fold)

    prepared = prepare_dataset(config)
    index = prepared.index
    click.echo(
        f"{index.num_users} users, {index.num_items} items, {index.num_ratings} ratings, "
        f"sparsity {sparsity(index):.2f}%"
    )
    click.echo(f"Split: {len(prepared.dataset.train)} train, {len(prepared.dataset.test)} test")

    config.save(layout.config)
    for path in write_split_dumps(config, prepared, layout):
        click.echo(f"Wrote {path}")


@cli.command()
@add_options(RUN_OPTIONS + MODEL_OPTIONS + TRAIN_OPTIONS)
@click.option("--theta", help="Relevancy thresholds the binary model is trained for")
@VERBOSE_OPTION
@handle_errors
def train(config_file: Optional[Path], verbose: int, **overrides: Any) -> None:
    """Train the selected model kinds and write checkpoints and training logs."""
    setup_logging(verbose)
    config = load_run_config(config_file, overrides)
    layout = RunLayout(config.output_dir, config.fold)

    prepared = prepare_dataset(config)
    config.save(layout.config)
    for job, model, history in train_models(config, prepared, layout):
        if history.epochs:
            last = history.epochs[-1]
            summary = f"{len(history)} epochs, train_loss {last.train_loss:.4f}"
            if last.test_metric is not None:
                summary += f", test {history.metric_name} {last.test_metric:.4f}"
        else:
            summary = "0 epochs, initial weights saved"
        click.echo(f"{job.label}: {summary}")
    click.echo(f"Checkpoints in {layout.checkpoints}")


@cli.command()
@add_options(RUN_OPTIONS + MODEL_OPTIONS + EVAL_OPTIONS)
@VERBOSE_OPTION
@handle_errors
def evaluate(config_file: Optional[Path], verbose: int, **overrides: Any) -> None:
    """Run the experiment grid on the trained checkpoints and write metrics CSVs."""
    setup_logging(verbose)
    config = load_run_config(config_file, overrides)
    layout = RunLayout(config.output_dir, config.fold)

    prepared = prepare_dataset(config)
    models = load_trained_models(config, layout, prepared.index)
    report = run_experiment_grid(models, prepared.dataset, config.eval)

    files = MetricsCsvWriter(layout.metrics).generate(report, config.eval.families)
    config.save(layout.config)
    click.echo(f"Created {len(files)} files in {layout.metrics}")


@cli.command()
@add_options(RUN_OPTIONS)
@click.option("--user", "user_raw", type=int, required=True, help="Raw user id")
@click.option("--n", "top_n", type=int, default=10, show_default=True,
              help="Number of recommendations")
@click.option("--theta", "relevancy", type=int, default=4, show_default=True,
              help="Minimum predicted rating")
@click.option("--reliability-min", "min_reliability", type=float,
              default=DEFAULT_RELIABILITY_MIN, show_default=True,
              help="Minimum reliability")
@click.option("--pool", type=click.Choice(["unrated", "test"]), default="unrated",
              show_default=True, help="Candidate items: unrated in train, or held-out")
@click.option("--dump", type=click.Path(dir_okay=False, path_type=Path),
              help="Also write the list as CSV")
@VERBOSE_OPTION
@handle_errors
def recommend(
    config_file: Optional[Path],
    verbose: int,
    user_raw: int,
    top_n: int,
    relevancy: int,
    min_reliability: float,
    pool: str,
    dump: Optional[Path],
    **overrides: Any,
) -> None:
    """Print a user's reliability-ordered recommendations from the classification model."""
    setup_logging(verbose)
    if top_n < 1:
        raise ConfigurationError("N must be ≥ 1")
    config = load_run_config(config_file, overrides)
    if not 1 <= relevancy <= config.v_max:
        raise ConfigurationError(f"theta {relevancy} outside score range 1:{config.v_max}")
    layout = RunLayout(config.output_dir, config.fold)

    prepared = prepare_dataset(config)
    index = prepared.index
    user_idx = index.user_map.get(user_raw)
    if user_idx is None:
        raise ConfigurationError(f"Unknown user id: {user_raw}")

    path = layout.checkpoint("classification")
    if not path.exists():
        raise CheckpointError(f"missing checkpoint for model classification: {path}")
    model = load_model(path)

    items = candidate_items(prepared.dataset, user_idx, index.num_items, pool)
    candidates = []
    if items.size:
        output = predict(model, np.full(items.size, user_idx, dtype=np.int64), items)
        candidates = candidates_from_output(model.kind, items, output, model.v_max)
    recommended = recommend_classification(candidates, top_n, relevancy, min_reliability)

    click.echo("rank,item,rating,reliability")
    for rank, candidate in enumerate(recommended, start=1):
        click.echo(
            f"{rank},{index.item_raw(candidate.item_idx)},{candidate.pair.rating},"
            f"{candidate.pair.reliability:.4f}"
        )
    if dump is not None:
        write_recommendations([(user_idx, recommended)], dump)


@cli.command()
@click.option("--config", "config_file", type=click.Path(dir_okay=False, path_type=Path),
              help="Config file")
@click.option("--scores", help="Score range, e.g. 1:5")
@click.option("--seed", type=int, help="Seed of the check batch and initialisation")
@click.option("--theta", help="Relevancy thresholds for the binary model")
@add_options(MODEL_OPTIONS + TRAIN_OPTIONS[:-1])
@click.option("--tolerance", type=float, default=GRADCHECK_TOLERANCE, show_default=True,
              help="Maximum accepted relative error")
@VERBOSE_OPTION
@handle_errors
def gradcheck(config_file: Optional[Path], verbose: int, tolerance: float,
              **overrides: Any) -> None:
    """Compare analytic and finite-difference gradients of each architecture."""
    setup_logging(verbose)
    config = load_run_config(config_file, overrides, require_data=False)

    failed = []
    for label, error in gradient_report(config).items():
        status = "ok" if error <= tolerance else "FAILED"
        click.echo(f"{label}: max relative error {error:.3e} {status}")
        if error > tolerance:
            failed.append(label)
    if failed:
        raise NCFReliabilityError(f"gradient check failed for {', '.join(failed)}")


@cli.command()
def presets() -> None:
    """List the built-in dataset presets."""
    for name in sorted(PRESETS):
        preset = PRESETS[name]
        thetas = ",".join(str(t) for t in preset.theta_values)
        betas = ",".join(str(b) for b in preset.beta_values)
        click.echo(f"{name}: {preset.description}")
        click.echo(f"  format {preset.fmt}, scores 1:{preset.v_max}, theta {thetas}, beta {betas}")


if __name__ == "__main__":
    cli()
