"""Gradient-descent update rules over n x 2 coordinate matrices."""

from dataclasses import dataclass, replace
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, Field

from spxlayout.errors import NonFiniteUpdate
from spxlayout.stress import Layout


class GDVariant(StrEnum):
    VANILLA = "vanilla"
    MOMENTUM = "momentum"
    NESTEROV = "nesterov"
    ADAGRAD = "adagrad"
    RMSPROP = "rmsprop"
    ADAM = "adam"


FIXED_RATE_VARIANTS = frozenset({GDVariant.VANILLA, GDVariant.MOMENTUM, GDVariant.NESTEROV})


class GDParams(BaseModel):
    """Hyperparameters shared by all variants; each uses the ones it needs."""

    learning_rate: float = Field(default=0.01, gt=0.0)
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    rms_decay: float = Field(default=0.9, ge=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)


def default_learning_rate(variant: GDVariant, diameter: float) -> float:
    """0.01 * graph diameter for the fixed-rate variants, 0.05 for adaptive ones."""
    if variant in FIXED_RATE_VARIANTS:
        return 0.01 * max(diameter, 1.0)
    return 0.05


@dataclass(frozen=True)
class GDState:
    """Optimizer accumulators.

    `velocity` serves momentum and Nesterov, `squares` holds Adagrad's sum or
    RMSprop's running mean of squared gradients, `first` and `second` are
    Adam's moment estimates.
    """

    velocity: Layout
    squares: Layout
    first: Layout
    second: Layout
    step: int = 0

    @classmethod
    def zeros(cls, n: int) -> "GDState":
        return cls(
            velocity=np.zeros((n, 2)),
            squares=np.zeros((n, 2)),
            first=np.zeros((n, 2)),
            second=np.zeros((n, 2)),
        )


def gd_step(
    layout: Layout,
    grad: Layout,
    state: GDState,
    variant: GDVariant,
    params: GDParams,
) -> tuple[Layout, GDState]:
    """Apply one update of `variant` and return the new layout and state.

    Inputs are not modified.

    Raises:
        ValueError: If the shapes of layout, gradient and state disagree.
        NonFiniteUpdate: If the update yields NaN or infinite coordinates.
    """
    if grad.shape != layout.shape or state.velocity.shape != layout.shape:
        raise ValueError(
            f"shape mismatch: layout {layout.shape}, gradient {grad.shape}, "
            f"state {state.velocity.shape}"
        )

    lr = params.learning_rate
    eps = params.epsilon
    step = state.step + 1

    match variant:
        case GDVariant.VANILLA:
            update = lr * grad
            new_state = replace(state, step=step)
        case GDVariant.MOMENTUM:
            velocity = params.momentum * state.velocity + grad
            update = lr * velocity
            new_state = replace(state, velocity=velocity, step=step)
        case GDVariant.NESTEROV:
            velocity = params.momentum * state.velocity + grad
            update = lr * (grad + params.momentum * velocity)
            new_state = replace(state, velocity=velocity, step=step)
        case GDVariant.ADAGRAD:
            squares = state.squares + grad**2
            update = lr * grad / (np.sqrt(squares) + eps)
            new_state = replace(state, squares=squares, step=step)
        case GDVariant.RMSPROP:
            decay = params.rms_decay
            squares = decay * state.squares + (1.0 - decay) * grad**2
            update = lr * grad / (np.sqrt(squares) + eps)
            new_state = replace(state, squares=squares, step=step)
        case GDVariant.ADAM:
            first = params.beta1 * state.first + (1.0 - params.beta1) * grad
            second = params.beta2 * state.second + (1.0 - params.beta2) * grad**2
            first_hat = first / (1.0 - params.beta1**step)
            second_hat = second / (1.0 - params.beta2**step)
            update = lr * first_hat / (np.sqrt(second_hat) + eps)
            new_state = replace(state, first=first, second=second, step=step)

    updated = layout - update
    if not np.all(np.isfinite(updated)):
        raise NonFiniteUpdate(f"{variant} step {step} produced non-finite coordinates")
    return updated, new_state
