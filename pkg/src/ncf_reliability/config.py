"""Configuration dataclasses for ncf-reliability."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from . import SUPPORTED_FORMATS, SUPPORTED_MODELS
from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

SUPPORTED_FAMILIES = ["topn", "perrating", "pvc"]
REGRESSION_TRUNKS = ["dot", "mlp"]
INIT_SCHEMES = ["glorot", "zeros"]


@dataclass
class TrainConfig:
    """Hyperparameters shared by every architecture."""

    epochs: int = 15
    batch_size: int = 256
    learning_rate: float = 0.001
    embed_dim: int = 10
    hidden: list[int] = field(default_factory=lambda: [80, 25])
    dropout: float = 0.4
    seed: int = 42
    shuffle: bool = True

    # DeepMF towers (last layer is linear)
    deepmf_layers: list[int] = field(default_factory=lambda: [128, 64])

    # Regression baseline merge: "dot" (architecture table) or "mlp" (NCF figure)
    regression_trunk: str = "dot"

    init: str = "glorot"

    def validate(self) -> None:
        """Validate counts and ranges."""
        if self.epochs < 0:
            raise ConfigurationError("epochs must be >= 0")
        if self.batch_size < 1:
            raise ConfigurationError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be positive")
        if self.embed_dim < 1:
            raise ConfigurationError("embed_dim must be >= 1")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ConfigurationError("hidden sizes must be positive")
        if not self.deepmf_layers or any(h < 1 for h in self.deepmf_layers):
            raise ConfigurationError("deepmf_layers sizes must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigurationError("dropout must be in [0, 1)")
        if self.regression_trunk not in REGRESSION_TRUNKS:
            raise ConfigurationError(
                f"Unknown regression_trunk: {self.regression_trunk}. "
                f"Supported: {', '.join(REGRESSION_TRUNKS)}"
            )
        if self.init not in INIT_SCHEMES:
            raise ConfigurationError(f"Unknown init scheme: {self.init}")


@dataclass
class EvalConfig:
    """Parameter grids of the three experiment families."""

    n_values: list[int] = field(default_factory=lambda: [2, 4, 6, 8, 10])
    theta_values: list[int] = field(default_factory=lambda: [3, 4, 5])
    beta_values: list[float] = field(default_factory=lambda: [4.0, 4.2, 4.4, 4.6, 4.8])
    per_rating_n: list[int] = field(default_factory=lambda: [2, 6, 10])
    pvc_n: int = 10
    reliability_min: float = 0.5
    families: list[str] = field(default_factory=lambda: list(SUPPORTED_FAMILIES))

    def validate(self, v_max: int) -> None:
        """Validate the grids against the score range [1, v_max]."""
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ConfigurationError("N must be >= 1")
        if any(n < 1 for n in self.per_rating_n) or self.pvc_n < 1:
            raise ConfigurationError("N must be >= 1")
        for theta in self.theta_values:
            if not 1 <= theta <= v_max:
                raise ConfigurationError(f"theta {theta} outside score range 1:{v_max}")
        for beta in self.beta_values:
            if not 1.0 <= beta <= v_max:
                raise ConfigurationError(f"beta {beta} outside score range 1:{v_max}")
        if not 0.0 <= self.reliability_min <= 1.0:
            raise ConfigurationError("reliability_min must be in [0, 1]")
        for family in self.families:
            if family not in SUPPORTED_FAMILIES:
                raise ConfigurationError(
                    f"Unknown family: {family}. Supported: {', '.join(SUPPORTED_FAMILIES)}"
                )


@dataclass(frozen=True)
class DatasetPreset:
    """Defaults for one of the public datasets."""

    name: str
    fmt: str
    v_max: int
    theta_values: tuple[int, ...]
    beta_values: tuple[float, ...]
    description: str


PRESETS: dict[str, DatasetPreset] = {
    "ml100k": DatasetPreset(
        name="ml100k", fmt="ml100k", v_max=5,
        theta_values=(3, 4, 5), beta_values=(4.0, 4.2, 4.4, 4.6, 4.8),
        description="MovieLens 100K (u.data)",
    ),
    "ml1m": DatasetPreset(
        name="ml1m", fmt="ml1m", v_max=5,
        theta_values=(3, 4, 5), beta_values=(4.0, 4.2, 4.4, 4.6, 4.8),
        description="MovieLens 1M (ratings.dat)",
    ),
    "myanimelist": DatasetPreset(
        name="myanimelist", fmt="csv", v_max=10,
        theta_values=(7, 8, 9), beta_values=(8.0, 8.4, 8.8, 9.2, 9.6),
        description="MyAnimeList subset (user,item,rating)",
    ),
    "netflix": DatasetPreset(
        name="netflix", fmt="csv", v_max=5,
        theta_values=(3, 4, 5), beta_values=(4.0, 4.2, 4.4, 4.6, 4.8),
        description="Netflix subset (user,item,rating)",
    ),
}


@dataclass
class RunConfig:
    """Everything needed to reproduce a run."""

    data: Optional[Path] = None
    fmt: str = "ml100k"
    score_range: tuple[int, int] = (1, 5)
    preset: Optional[str] = None
    models: list[str] = field(default_factory=lambda: list(SUPPORTED_MODELS))
    train: TrainConfig = field(default_factory=TrainConfig)
    eval: EvalConfig = field(default_factory=EvalConfig)
    output_dir: Path = field(default_factory=lambda: Path("./runs/default"))
    train_ratio: float = 0.8
    folds: int = 1
    fold: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.output_dir, str):
            self.output_dir = Path(self.output_dir)
        if isinstance(self.data, str):
            self.data = Path(self.data)

    @property
    def seed(self) -> int:
        return self.train.seed

    @property
    def v_max(self) -> int:
        return self.score_range[1]

    def validate(self) -> None:
        """Validate the configuration is complete and consistent."""
        if self.data is None:
            raise ConfigurationError("Dataset path is required (--data)")
        if self.fmt not in SUPPORTED_FORMATS:
            raise ConfigurationError(
                f"Unknown format: {self.fmt}. Supported: {', '.join(SUPPORTED_FORMATS)}"
            )
        low, high = self.score_range
        if low != 1 or high < 2:
            raise ConfigurationError("Score range must be 1:V with V >= 2")
        for kind in self.models:
            if kind not in SUPPORTED_MODELS:
                raise ConfigurationError(
                    f"Unknown model kind: {kind}. Supported: {', '.join(SUPPORTED_MODELS)}"
                )
        if not 0.0 < self.train_ratio < 1.0:
            raise ConfigurationError("train_ratio must be in (0, 1)")
        if self.folds < 1:
            raise ConfigurationError("folds must be >= 1")
        if not 0 <= self.fold < self.folds:
            raise ConfigurationError(f"fold must be in [0, {self.folds})")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        self.train.validate()
        self.eval.validate(self.v_max)

    def apply_preset(self, name: str) -> None:
        """Overwrite dataset-dependent defaults with a preset."""
        preset = PRESETS.get(name)
        if preset is None:
            raise ConfigurationError(
                f"Unknown preset: {name}. Available: {', '.join(sorted(PRESETS))}"
            )
        self.preset = name
        self.fmt = preset.fmt
        self.score_range = (1, preset.v_max)
        self.eval.theta_values = list(preset.theta_values)
        self.eval.beta_values = list(preset.beta_values)

    def set(self, key: str, value: Any) -> None:
        """Set one flat config key; strings are parsed, typed values taken as-is."""
        entry = _KEYS.get(key)
        if entry is None:
            raise ConfigurationError(f"Unknown config key: {key}")
        setter, parse, _ = entry
        try:
            setter(self, parse(value))
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"Invalid value for {key}: {value!r} ({e})") from e

    def to_mapping(self) -> dict[str, str]:
        """Flatten to the key/value pairs of the config file."""
        return {key: fmt(self) for key, (_, _, fmt) in sorted(_KEYS.items())}

    def to_text(self) -> str:
        lines = [f"{key} = {value}" for key, value in self.to_mapping().items()]
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        logger.debug(f"Wrote config: {path}")
        return path


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat `key = value` lines; `#` comments and blank lines are skipped."""
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"Config line {number}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return values


def resolve_run_config(
    config_path: Optional[Path] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> RunConfig:
    """Build a RunConfig: defaults < preset < config file < overrides."""
    file_values: dict[str, Any] = {}
    if config_path is not None and Path(config_path).exists():
        file_values = parse_config_text(Path(config_path).read_text(encoding="utf-8"))
        logger.info(f"Loaded config from {config_path}")

    flag_values = {k: v for k, v in (overrides or {}).items() if v is not None}
    merged = {**file_values, **flag_values}

    config = RunConfig()
    preset = merged.get("preset")
    if preset:
        config.apply_preset(str(preset))

    for key, value in file_values.items():
        if key != "preset":
            config.set(key, value)
    for key, value in flag_values.items():
        if key != "preset":
            config.set(key, value)
    return config


# --- flat key table -------------------------------------------------------

def _split(value: Any) -> list[Any]:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return list(value)


def _int_list(value: Any) -> list[int]:
    return [int(v) for v in _split(value)]


def _float_list(value: Any) -> list[float]:
    return [float(v) for v in _split(value)]


def _str_list(value: Any) -> list[str]:
    return [str(v).lower() for v in _split(value)]


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value}")


def _scores(value: Any) -> tuple[int, int]:
    if isinstance(value, str):
        low, _, high = value.partition(":")
        return int(low), int(high)
    low, high = value
    return int(low), int(high)


def _models(value: Any) -> list[str]:
    kinds = _str_list(value)
    if "all" in kinds:
        return list(SUPPORTED_MODELS)
    return kinds


def _families(value: Any) -> list[str]:
    families = _str_list(value)
    if "all" in families:
        return list(SUPPORTED_FAMILIES)
    return families


def _join(values: list[Any]) -> str:
    return ",".join(repr(v) if isinstance(v, float) else str(v) for v in values)


def _opt_path(value: Any) -> Optional[Path]:
    if value in (None, ""):
        return None
    return Path(value)


def _attr(path: str) -> Callable[[RunConfig, Any], None]:
    def setter(config: RunConfig, value: Any) -> None:
        target: Any = config
        parts = path.split(".")
        for part in parts[:-1]:
            target = getattr(target, part)
        setattr(target, parts[-1], value)

    return setter


def _get(path: str) -> Callable[[RunConfig], Any]:
    def getter(config: RunConfig) -> Any:
        target: Any = config
        for part in path.split("."):
            target = getattr(target, part)
        return target

    return getter


def _scalar(path: str) -> Callable[[RunConfig], str]:
    get = _get(path)
    return lambda config: "" if get(config) is None else (
        repr(get(config)) if isinstance(get(config), float) else str(get(config))
    )


def _listed(path: str) -> Callable[[RunConfig], str]:
    get = _get(path)
    return lambda config: _join(get(config))


_KEYS: dict[str, tuple[Callable, Callable, Callable]] = {
    "data": (_attr("data"), _opt_path, _scalar("data")),
    "format": (_attr("fmt"), lambda v: str(v).lower(), _scalar("fmt")),
    "scores": (_attr("score_range"), _scores,
               lambda c: f"{c.score_range[0]}:{c.score_range[1]}"),
    "preset": (_attr("preset"), lambda v: str(v) or None, _scalar("preset")),
    "model": (_attr("models"), _models, _listed("models")),
    "epochs": (_attr("train.epochs"), int, _scalar("train.epochs")),
    "batch": (_attr("train.batch_size"), int, _scalar("train.batch_size")),
    "lr": (_attr("train.learning_rate"), float, _scalar("train.learning_rate")),
    "embed": (_attr("train.embed_dim"), int, _scalar("train.embed_dim")),
    "hidden": (_attr("train.hidden"), _int_list, _listed("train.hidden")),
    "dropout": (_attr("train.dropout"), float, _scalar("train.dropout")),
    "seed": (_attr("train.seed"), int, _scalar("train.seed")),
    "shuffle": (_attr("train.shuffle"), _bool, _scalar("train.shuffle")),
    "deepmf_layers": (_attr("train.deepmf_layers"), _int_list, _listed("train.deepmf_layers")),
    "regression_trunk": (_attr("train.regression_trunk"), lambda v: str(v).lower(),
                         _scalar("train.regression_trunk")),
    "init": (_attr("train.init"), lambda v: str(v).lower(), _scalar("train.init")),
    "n": (_attr("eval.n_values"), _int_list, _listed("eval.n_values")),
    "theta": (_attr("eval.theta_values"), _int_list, _listed("eval.theta_values")),
    "beta": (_attr("eval.beta_values"), _float_list, _listed("eval.beta_values")),
    "per_rating_n": (_attr("eval.per_rating_n"), _int_list, _listed("eval.per_rating_n")),
    "pvc_n": (_attr("eval.pvc_n"), int, _scalar("eval.pvc_n")),
    "reliability_min": (_attr("eval.reliability_min"), float, _scalar("eval.reliability_min")),
    "family": (_attr("eval.families"), _families, _listed("eval.families")),
    "out": (_attr("output_dir"), Path, _scalar("output_dir")),
    "train_ratio": (_attr("train_ratio"), float, _scalar("train_ratio")),
    "folds": (_attr("folds"), int, _scalar("folds")),
    "fold": (_attr("fold"), int, _scalar("fold")),
    "workers": (_attr("workers"), int, _scalar("workers")),
}
