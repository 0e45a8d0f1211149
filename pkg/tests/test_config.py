"""Tests for configuration loading."""

import tempfile
from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from spxlayout.config import Config, OptimizerConfig, SweepConfig, load_config
from spxlayout.optimizer import GDVariant, InitMethod, Selection
from spxlayout.penalties.cost import PenaltyMode


class TestConfig:
    """Tests for Config class."""

    def test_default_config(self) -> None:
        """Test that default config loads with sensible defaults."""
        config = Config()

        assert config.optimizer.k == 1.0
        assert config.optimizer.variant == GDVariant.VANILLA
        assert config.optimizer.mode == PenaltyMode.CROSSING_ONLY
        assert config.optimizer.outer_iters == 100
        assert config.majorization.max_iters == 300
        assert config.majorization.polish_iters == 200
        assert config.optimizer.keep_best is True

    def test_sweep_defaults(self) -> None:
        """Test sweep config defaults."""
        config = Config()

        assert config.sweep.k_exponents == (-5, 5)
        assert config.sweep.restarts == 5
        assert config.sweep.selection == Selection.COST
        assert config.sweep.workers == 1

    def test_output_defaults(self) -> None:
        """Test output config defaults."""
        config = Config()

        assert config.output.enable_csv is True
        assert config.output.enable_json is False
        assert config.output.trace_dir == Path("./traces")

    def test_invalid_value(self) -> None:
        """Test that out-of-range values are rejected."""
        with pytest.raises(ValidationError):
            OptimizerConfig(k=-1.0)
        with pytest.raises(ValidationError):
            SweepConfig(restarts=0)


class TestRunConfig:
    """Tests for Config.run_config."""

    def test_defaults_flow_through(self) -> None:
        """Test that section values reach the run config."""
        config = Config(
            optimizer=OptimizerConfig(k=4.0, momentum=0.5, keep_best=False, divergence_factor=50.0),
            majorization={"max_iters": 17, "polish_iters": 0},  # type: ignore[arg-type]
        )

        cfg = config.run_config()

        assert cfg.k == 4.0
        assert cfg.gd.momentum == 0.5
        assert cfg.majorization_iters == 17
        assert cfg.polish_iters == 0
        assert cfg.keep_best is False
        assert cfg.divergence_factor == 50.0

    def test_overrides(self) -> None:
        """Test that overrides replace defaults and None is ignored."""
        cfg = Config().run_config(k=8.0, variant=GDVariant.ADAM, seed=None, upward=True)

        assert cfg.k == 8.0
        assert cfg.variant == GDVariant.ADAM
        assert cfg.upward is True
        assert cfg.seed == 0


class TestSweepGrid:
    """Tests for Config.sweep_grid."""

    def test_default_grid(self) -> None:
        """Test the grid built from defaults."""
        grid = Config().sweep_grid()

        assert len(grid.k_values) == 11
        assert grid.restarts == 5

    def test_overrides(self) -> None:
        """Test K range and restart overrides."""
        config = Config(
            sweep=SweepConfig(variants=[GDVariant.ADAM], init_methods=[InitMethod.RANDOM])
        )

        grid = config.sweep_grid(k_range=(0, 2), restarts=2)

        assert grid.k_values == [1.0, 2.0, 4.0]
        assert len(grid.cells()) == 3 * 1 * 1 * 2


class TestLoadConfig:
    """Tests for load_config function."""

    def test_load_config_no_file(self) -> None:
        """Test loading config without a file."""
        config = load_config(None)

        assert config.optimizer.k == 1.0

    def test_load_config_missing_file(self) -> None:
        """Test that a missing path falls back to defaults."""
        config = load_config(Path("/nonexistent/spx.yaml"))

        assert config.sweep.restarts == 5

    def test_load_config_from_yaml(self) -> None:
        """Test loading config from YAML file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "spx.yaml"
            config_path.write_text(
                yaml.dump(
                    {
                        "optimizer": {"k": 2.0, "variant": "rmsprop"},
                        "sweep": {"variants": ["adam"], "restarts": 2},
                    }
                ),
                encoding="utf-8",
            )

            config = load_config(config_path)

        assert config.optimizer.k == 2.0
        assert config.optimizer.variant == GDVariant.RMSPROP
        assert config.sweep.variants == [GDVariant.ADAM]
        assert config.sweep.restarts == 2

    def test_empty_yaml(self) -> None:
        """Test that an empty file gives defaults."""
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "empty.yaml"
            config_path.write_text("", encoding="utf-8")

            assert load_config(config_path).optimizer.outer_iters == 100

    def test_env_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test nested environment variables."""
        monkeypatch.setenv("SPX_OPTIMIZER__K", "16")

        assert load_config(None).optimizer.k == 16.0
