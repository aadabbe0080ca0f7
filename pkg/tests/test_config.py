"""Tests for configuration module."""

from pathlib import Path

import pytest

from ncf_reliability.config import (
    PRESETS,
    EvalConfig,
    RunConfig,
    TrainConfig,
    parse_config_text,
    resolve_run_config,
)
from ncf_reliability.exceptions import ConfigurationError


class TestTrainConfig:
    """Tests for TrainConfig class."""

    def test_defaults_validate(self):
        """Default hyperparameters should validate."""
        TrainConfig().validate()

    def test_default_architecture(self):
        """Defaults describe the 10-dim embeddings and the 80/25 trunk."""
        cfg = TrainConfig()
        assert cfg.embed_dim == 10
        assert cfg.hidden == [80, 25]
        assert cfg.dropout == 0.4
        assert cfg.epochs == 15

    def test_zero_epochs_allowed(self):
        """Zero epochs is valid (checkpoint of the initial weights)."""
        TrainConfig(epochs=0).validate()

    def test_dropout_of_one_rejected(self):
        """Dropout rate must be below 1."""
        with pytest.raises(ConfigurationError, match="dropout"):
            TrainConfig(dropout=1.0).validate()

    def test_unknown_regression_trunk(self):
        """Unknown regression merge should fail."""
        with pytest.raises(ConfigurationError, match="regression_trunk"):
            TrainConfig(regression_trunk="cosine").validate()

    def test_nonpositive_batch(self):
        """Batch size must be positive."""
        with pytest.raises(ConfigurationError, match="batch_size"):
            TrainConfig(batch_size=0).validate()


class TestEvalConfig:
    """Tests for EvalConfig class."""

    def test_default_grids(self):
        """Default grids match the 1-5 scale experiment plan."""
        cfg = EvalConfig()
        assert cfg.n_values == [2, 4, 6, 8, 10]
        assert cfg.theta_values == [3, 4, 5]
        assert cfg.beta_values == [4.0, 4.2, 4.4, 4.6, 4.8]
        assert cfg.per_rating_n == [2, 6, 10]
        cfg.validate(5)

    def test_theta_outside_scale(self):
        """Thetas must lie inside the score range."""
        with pytest.raises(ConfigurationError, match="theta 7"):
            EvalConfig(theta_values=[7]).validate(5)

    def test_beta_outside_scale(self):
        """Betas must lie inside [1, V]."""
        with pytest.raises(ConfigurationError, match="beta"):
            EvalConfig(beta_values=[5.5]).validate(5)

    def test_zero_n_rejected(self):
        """N must be at least 1."""
        with pytest.raises(ConfigurationError, match="N must be"):
            EvalConfig(n_values=[0, 2]).validate(5)

    def test_unknown_family(self):
        """Unknown experiment family should fail."""
        with pytest.raises(ConfigurationError, match="Unknown family"):
            EvalConfig(families=["roc"]).validate(5)


class TestRunConfig:
    """Tests for RunConfig class."""

    def test_requires_data(self):
        """A run without a dataset path should fail."""
        with pytest.raises(ConfigurationError, match="Dataset path is required"):
            RunConfig().validate()

    def test_string_paths_normalised(self):
        """String paths become Path objects."""
        config = RunConfig(data="u.data", output_dir="runs/x")
        assert config.data == Path("u.data")
        assert config.output_dir == Path("runs/x")

    def test_unknown_format(self):
        """Unknown format should fail."""
        config = RunConfig(data=Path("u.data"), fmt="parquet")
        with pytest.raises(ConfigurationError, match="Unknown format"):
            config.validate()

    def test_score_range_must_start_at_one(self):
        """Score ranges are 1:V."""
        config = RunConfig(data=Path("u.data"), score_range=(0, 5))
        with pytest.raises(ConfigurationError, match="Score range"):
            config.validate()

    def test_fold_outside_folds(self):
        """The selected fold must exist."""
        config = RunConfig(data=Path("u.data"), folds=2, fold=2)
        with pytest.raises(ConfigurationError, match="fold"):
            config.validate()

    def test_set_parses_strings(self):
        """Flat keys parse their string values."""
        config = RunConfig()
        config.set("scores", "1:10")
        config.set("hidden", "40, 20")
        config.set("beta", "8,8.5")
        config.set("shuffle", "false")
        assert config.score_range == (1, 10)
        assert config.train.hidden == [40, 20]
        assert config.eval.beta_values == [8.0, 8.5]
        assert config.train.shuffle is False

    def test_set_all_models(self):
        """`model = all` expands to every architecture."""
        config = RunConfig(models=["regression"])
        config.set("model", "all")
        assert config.models == ["classification", "regression", "binary", "deepmf"]

    def test_set_unknown_key(self):
        """Unknown keys are named in the error."""
        with pytest.raises(ConfigurationError, match="Unknown config key: colour"):
            RunConfig().set("colour", "blue")

    def test_set_bad_value(self):
        """Unparseable values raise ConfigurationError."""
        with pytest.raises(ConfigurationError, match="Invalid value for epochs"):
            RunConfig().set("epochs", "many")

    def test_apply_preset(self):
        """A 1-10 preset moves the score range and the thresholds."""
        config = RunConfig()
        config.apply_preset("myanimelist")
        assert config.fmt == "csv"
        assert config.score_range == (1, 10)
        assert config.eval.theta_values == [7, 8, 9]

    def test_unknown_preset(self):
        """Unknown preset should fail."""
        with pytest.raises(ConfigurationError, match="Unknown preset"):
            RunConfig().apply_preset("lastfm")

    def test_text_round_trip(self, tmp_path):
        """A saved config resolves back to an equal object."""
        config = RunConfig(data=Path("ml/u.data"), output_dir=Path("runs/a"), folds=3, fold=1)
        config.train.hidden = [16, 8]
        config.eval.beta_values = [4.0, 4.5]
        path = config.save(tmp_path / "config")
        assert resolve_run_config(path) == config

    def test_text_is_sorted_key_value(self):
        """One `key = value` line per key, sorted."""
        lines = RunConfig().to_text().splitlines()
        keys = [line.split(" = ")[0] for line in lines]
        assert keys == sorted(keys)
        assert "embed = 10" in lines


class TestResolveRunConfig:
    """Tests for config precedence."""

    def test_parse_skips_comments(self):
        """Comments and blank lines are ignored."""
        values = parse_config_text("# run\n\nepochs = 3  # short\nlr=0.01\n")
        assert values == {"epochs": "3", "lr": "0.01"}

    def test_parse_rejects_bare_line(self):
        """Lines without '=' are errors."""
        with pytest.raises(ConfigurationError, match="line 1"):
            parse_config_text("epochs 3\n")

    def test_flags_override_file(self, tmp_path):
        """Command-line values win over the config file."""
        path = tmp_path / "config"
        path.write_text("epochs = 3\nembed = 12\n")
        config = resolve_run_config(path, {"epochs": 5, "embed": None})
        assert config.train.epochs == 5
        assert config.train.embed_dim == 12

    def test_file_overrides_preset(self, tmp_path):
        """The config file wins over the preset it names."""
        path = tmp_path / "config"
        path.write_text("preset = myanimelist\ntheta = 8\n")
        config = resolve_run_config(path)
        assert config.score_range == (1, 10)
        assert config.eval.theta_values == [8]

    def test_missing_file_uses_defaults(self, tmp_path):
        """A config path that does not exist leaves defaults."""
        config = resolve_run_config(tmp_path / "nope", {"seed": 3})
        assert config.seed == 3
        assert config.train.batch_size == 256

    def test_presets_cover_public_datasets(self):
        """Presets exist for the datasets the CLI documents."""
        assert set(PRESETS) == {"ml100k", "ml1m", "myanimelist", "netflix"}
        assert PRESETS["ml1m"].fmt == "ml1m"
