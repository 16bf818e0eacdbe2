"""
One-vs-rest logistic regression trained by full-batch gradient descent.

The L2 penalty is applied as a proximal step, w <- (w - lr * grad) / (1 + lr * l2),
which stays stable for any penalty strength. Biases are not penalized.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import sparse
from scipy.special import expit

from ..errors import ArgumentError, TrainingError

Features = Union[np.ndarray, sparse.spmatrix]


@dataclass
class LogRegModel:
    """Weights (m x C), biases (C,) and the class id of each column."""
    weights: np.ndarray
    bias: np.ndarray
    classes: np.ndarray


def _one_vs_rest(labels: np.ndarray, classes: np.ndarray) -> np.ndarray:
    return (labels[:, None] == classes[None, :]).astype(np.float64)


def logreg_loss_and_grad(
    weights: np.ndarray, bias: np.ndarray, X: Features, Y: np.ndarray, l2_strength: float
) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Summed per-class mean logistic loss plus (l2 / 2) * ||W||^2.

    Returns:
        (loss, dW, db)
    """
    n = X.shape[0]
    scores = np.asarray(X @ weights) + bias
    # log(1 + exp(s)) - y * s, written stably
    loss = float((np.logaddexp(0.0, scores) - Y * scores).sum() / n + 0.5 * l2_strength * np.sum(weights**2))
    residual = (expit(scores) - Y) / n
    dW = np.asarray(X.T @ residual) + l2_strength * weights
    db = residual.sum(axis=0)
    return loss, dW, db


def logreg_train(
    features: Features,
    labels: np.ndarray,
    l2_strength: float = 1e-3,
    epochs: int = 500,
    lr: float = 0.5,
    seed: int = 0,
) -> LogRegModel:
    """
    Fit one binary classifier per class present in labels.

    Raises:
        TrainingError: fewer than two classes in labels
    """
    labels = np.asarray(labels, dtype=np.int64)
    if features.shape[0] != len(labels):
        raise ArgumentError(f"Got {features.shape[0]} feature rows for {len(labels)} labels")
    classes = np.unique(labels)
    if len(classes) < 2:
        raise TrainingError("Training data must contain at least two classes")

    rng = np.random.default_rng(seed)
    n, m = features.shape
    weights = rng.normal(0.0, 0.01, size=(m, len(classes)))
    bias = np.zeros(len(classes))
    Y = _one_vs_rest(labels, classes)
    for _ in range(epochs):
        residual = (expit(np.asarray(features @ weights) + bias) - Y) / n
        weights = (weights - lr * np.asarray(features.T @ residual)) / (1.0 + lr * l2_strength)
        bias = bias - lr * residual.sum(axis=0)
    return LogRegModel(weights=weights, bias=bias, classes=classes)


def logreg_predict(model: LogRegModel, features: Features) -> np.ndarray:
    """Class with the highest one-vs-rest score."""
    scores = np.asarray(features @ model.weights) + model.bias
    return model.classes[scores.argmax(axis=1)]
