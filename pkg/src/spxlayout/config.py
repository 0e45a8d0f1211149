"""Configuration management for spxlayout."""

from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from spxlayout.optimizer.descent import GDParams, GDVariant
from spxlayout.optimizer.init import InitMethod
from spxlayout.optimizer.spx import RunConfig, Selection
from spxlayout.optimizer.sweep import DEFAULT_K_EXPONENTS, SweepGrid
from spxlayout.penalties.cost import PenaltyMode


class MajorizationConfig(BaseModel):
    """Stress majorization settings."""

    max_iters: int = Field(default=300, ge=1)
    tol: float = Field(default=1e-6, gt=0.0)
    polish_iters: int = Field(default=200, ge=0)


class ForceDirectedConfig(BaseModel):
    """Fruchterman-Reingold settings."""

    iterations: int = Field(default=500, ge=1)
    min_distance: float = Field(default=0.01, gt=0.0)


class OptimizerConfig(BaseModel):
    """Single-run defaults."""

    k: float = Field(default=1.0, gt=0.0)
    variant: GDVariant = GDVariant.VANILLA
    mode: PenaltyMode = PenaltyMode.CROSSING_ONLY
    init_method: InitMethod = InitMethod.STRESS
    outer_iters: int = Field(default=100, ge=0)
    inner_steps: int = Field(default=1, ge=1)
    upward_eps: float = Field(default=0.01, gt=0.0)
    upward_mu: float = Field(default=10.0, gt=0.0)
    frozen_theta: bool = False
    keep_best: bool = True
    divergence_factor: float = Field(default=1e3, gt=0.0)
    pivot_budget: int = Field(default=200, ge=1)

    # Variant hyperparameters
    learning_rate: float | None = Field(default=None, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    rms_decay: float = Field(default=0.9, ge=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)


class SweepConfig(BaseModel):
    """Multi-start sweep settings."""

    k_exponents: tuple[int, int] = (DEFAULT_K_EXPONENTS[0], DEFAULT_K_EXPONENTS[-1])
    variants: list[GDVariant] = Field(default_factory=lambda: list(GDVariant))
    init_methods: list[InitMethod] = Field(default_factory=lambda: list(InitMethod))
    restarts: int = Field(default=5, ge=1)
    selection: Selection = Selection.COST
    workers: int = Field(default=1, ge=1)
    base_seed: int = Field(default=0, ge=0)


class GeneratorConfig(BaseModel):
    """Corpus generator settings."""

    max_attempts: int = Field(default=1000, ge=1)
    communities: int = Field(default=5, ge=1)
    p_in: float = Field(default=0.3, ge=0.0, le=1.0)
    p_out: float = Field(default=0.01, ge=0.0, le=1.0)


class OutputConfig(BaseModel):
    """Trace and rendering output settings."""

    trace_dir: Path = Field(default_factory=lambda: Path("./traces"))
    enable_csv: bool = True
    enable_json: bool = False
    svg_padding: float = Field(default=20.0, ge=0.0)
    svg_scale: float = Field(default=50.0, gt=0.0)


class Config(BaseSettings):
    """Main application configuration."""

    model_config = SettingsConfigDict(
        env_prefix="SPX_",
        env_nested_delimiter="__",
    )

    majorization: MajorizationConfig = Field(default_factory=MajorizationConfig)
    force_directed: ForceDirectedConfig = Field(default_factory=ForceDirectedConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    generator: GeneratorConfig = Field(default_factory=GeneratorConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    def run_config(self, **overrides: Any) -> RunConfig:
        """RunConfig from the configured defaults, with CLI overrides applied.

        Overrides set to None are ignored.
        """
        opt = self.optimizer
        values: dict[str, Any] = {
            "k": opt.k,
            "variant": opt.variant,
            "mode": opt.mode,
            "init_method": opt.init_method,
            "outer_iters": opt.outer_iters,
            "inner_steps": opt.inner_steps,
            "upward_eps": opt.upward_eps,
            "upward_mu": opt.upward_mu,
            "frozen_theta": opt.frozen_theta,
            "keep_best": opt.keep_best,
            "divergence_factor": opt.divergence_factor,
            "selection": self.sweep.selection,
            "learning_rate": opt.learning_rate,
            "pivot_budget": opt.pivot_budget,
            "gd": GDParams(
                momentum=opt.momentum,
                beta1=opt.beta1,
                beta2=opt.beta2,
                rms_decay=opt.rms_decay,
                epsilon=opt.epsilon,
            ),
            "majorization_iters": self.majorization.max_iters,
            "majorization_tol": self.majorization.tol,
            "polish_iters": self.majorization.polish_iters,
            "fr_iterations": self.force_directed.iterations,
            "fr_min_distance": self.force_directed.min_distance,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return RunConfig(**values)

    def sweep_grid(
        self, k_range: tuple[int, int] | None = None, restarts: int | None = None
    ) -> SweepGrid:
        low, high = k_range or self.sweep.k_exponents
        return SweepGrid.from_exponents(
            low,
            high,
            variants=list(self.sweep.variants),
            init_methods=list(self.sweep.init_methods),
            restarts=restarts or self.sweep.restarts,
        )


def load_config(config_path: Path | None = None) -> Config:
    """Load configuration from file and environment.

    Args:
        config_path: Optional path to YAML config file.

    Returns:
        Loaded configuration.
    """
    config_data: dict[str, Any] = {}

    if config_path and config_path.exists():
        import yaml

        with open(config_path, encoding="utf-8") as f:
            loaded = yaml.safe_load(f)
            if loaded:
                config_data = loaded

    return Config(**config_data)
