"""
Finite-difference verification of the network's backward pass.
"""

from typing import Dict, Optional

import numpy as np
import structlog

from ..types import GradCheckReport, ModelConfig
from .model import PARAM_NAMES, Model, init_model, loss_and_gradients

logger = structlog.get_logger(__name__)

DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-6


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """||a - n|| / max(||a|| + ||n||, 1e-12)."""
    denominator = max(float(np.linalg.norm(analytic) + np.linalg.norm(numeric)), 1e-12)
    return float(np.linalg.norm(analytic - numeric)) / denominator


def numerical_gradient(model: Model, name: str, batch: np.ndarray, targets: np.ndarray, mask: np.ndarray, step: float) -> np.ndarray:
    """Central differences of the eval-mode loss for one parameter tensor."""
    param = model.params[name]
    grad = np.zeros_like(param)
    flat_param, flat_grad = param.reshape(-1), grad.reshape(-1)
    for i in range(flat_param.size):
        original = flat_param[i]
        flat_param[i] = original + step
        loss_plus, _ = loss_and_gradients(model, batch, targets, train_mode=False, mask=mask)
        flat_param[i] = original - step
        loss_minus, _ = loss_and_gradients(model, batch, targets, train_mode=False, mask=mask)
        flat_param[i] = original
        flat_grad[i] = (loss_plus - loss_minus) / (2.0 * step)
    return grad


def grad_check(
    config: ModelConfig,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
    step: float = DEFAULT_STEP,
    batch_size: int = 3,
    zero_input: bool = False,
    model: Optional[Model] = None,
) -> GradCheckReport:
    """
    Compare analytic and central-difference gradients for every parameter group.

    Biases get small random values so that pre-activations stay away from the
    ReLU kink. Every slot is active, dropout is off.

    Args:
        config: Network shape; keep it small
        seed: Seed for weights, inputs and targets
        tolerance: Largest accepted relative error
        step: Finite-difference step
        batch_size: Number of random graphs
        zero_input: Use an all-zero batch
        model: Check this model instead of a freshly initialized one

    Returns:
        GradCheckReport with one relative error per parameter group
    """
    rng = np.random.default_rng(seed)
    if model is None:
        model = init_model(config, seed)
        for name in PARAM_NAMES:
            if name.endswith("_b"):
                model.params[name] = rng.uniform(-0.1, 0.1, size=model.params[name].shape)

    shape = (batch_size, config.sequence_len * config.field_size, config.input_dim)
    batch = np.zeros(shape) if zero_input else rng.uniform(0.0, 1.0, size=shape)
    mask = np.ones((batch_size, config.sequence_len), dtype=bool)
    targets = rng.integers(config.class_count, size=batch_size)

    _, analytic = loss_and_gradients(model, batch, targets, train_mode=False, mask=mask)
    errors: Dict[str, float] = {}
    for name in PARAM_NAMES:
        numeric = numerical_gradient(model, name, batch, targets, mask, step)
        errors[name] = relative_error(analytic[name], numeric)

    report = GradCheckReport(errors=errors, tolerance=tolerance, step=step)
    logger.info(
        "grad_check_completed",
        parameters=model.parameter_count,
        max_error=report.max_error,
        failing=report.failing_groups,
    )
    return report
