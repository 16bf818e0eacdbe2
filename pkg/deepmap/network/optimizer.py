"""
RMSprop updates and loss-plateau learning-rate decay.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import structlog

from ..errors import TrainingError
from .model import Model

logger = structlog.get_logger(__name__)


@dataclass
class RmsPropState:
    """Running averages of squared gradients, one per parameter."""
    accumulators: Dict[str, np.ndarray]
    rho: float = 0.9
    eps: float = 1e-8
    steps: int = 0


def init_rmsprop_state(model: Model, rho: float = 0.9, eps: float = 1e-8) -> RmsPropState:
    return RmsPropState(
        accumulators={name: np.zeros_like(p) for name, p in model.params.items()},
        rho=rho,
        eps=eps,
    )


def rmsprop_step(
    model: Model, gradients: Dict[str, np.ndarray], state: RmsPropState, lr: float
) -> Tuple[Model, RmsPropState]:
    """
    One RMSprop update, in place.

    a <- rho * a + (1 - rho) * g^2
    p <- p - lr * g / (sqrt(a) + eps)

    Raises:
        TrainingError: a gradient or updated parameter is not finite; the model
            and state are left unchanged
    """
    for name, grad in gradients.items():
        if name not in model.params:
            raise TrainingError(f"Gradient for unknown parameter {name}")
        if grad.shape != model.params[name].shape:
            raise TrainingError(f"Gradient shape {grad.shape} does not match parameter {name}")
        if not np.all(np.isfinite(grad)):
            raise TrainingError(f"Non-finite gradient for {name}")

    updates: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
    for name, grad in gradients.items():
        accumulator = state.rho * state.accumulators[name] + (1.0 - state.rho) * grad * grad
        param = model.params[name] - lr * grad / (np.sqrt(accumulator) + state.eps)
        if not (np.all(np.isfinite(accumulator)) and np.all(np.isfinite(param))):
            raise TrainingError(f"Parameter {name} became non-finite")
        updates[name] = (accumulator, param)

    for name, (accumulator, param) in updates.items():
        state.accumulators[name][...] = accumulator
        model.params[name][...] = param
    state.steps += 1
    return model, state


@dataclass
class PlateauScheduler:
    """
    Multiplies the learning rate by factor once the loss has not improved
    on its best value for `patience` consecutive epochs.

    An epoch that sets a new best resets the count. A loss held flat at an
    established best (pass `best` to start from one) reduces the rate at
    epochs patience, 2 * patience, ...
    """
    lr: float
    factor: float = 0.5
    patience: int = 5
    best: float = field(default=float("inf"))
    wait: int = 0
    reductions: int = 0

    def step(self, loss: float) -> float:
        """Record an epoch loss; returns the learning rate for the next epoch."""
        if loss < self.best:
            self.best = loss
            self.wait = 0
            return self.lr
        self.wait += 1
        if self.wait >= self.patience:
            previous = self.lr
            self.lr *= self.factor
            self.wait = 0
            self.reductions += 1
            logger.info("learning_rate_reduced", previous=previous, lr=self.lr, best_loss=self.best)
        return self.lr
