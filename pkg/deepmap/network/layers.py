"""
Forward and backward primitives of the network, all float64 numpy.
"""

from typing import Optional, Tuple, Union

import numpy as np
from scipy import sparse

Matrix = Union[np.ndarray, sparse.spmatrix]


def glorot_uniform(fan_in: int, fan_out: int, rng: np.random.Generator) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def affine_forward(x: Matrix, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """x @ w + b; x may be a sparse row matrix."""
    return np.asarray(x @ w) + b


def affine_backward(dout: np.ndarray, x: Matrix, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(dx, dw, db) of affine_forward."""
    dw = np.asarray(x.T @ dout)
    db = dout.sum(axis=0)
    dx = dout @ w.T
    return dx, dw, db


def relu_forward(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def relu_backward(dout: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.where(z > 0, dout, 0.0)


def dropout_forward(
    x: np.ndarray, rate: float, rng: np.random.Generator, train_mode: bool
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Inverted dropout: kept units are scaled by 1 / (1 - rate); identity outside training."""
    if not train_mode or rate == 0.0:
        return x, None
    keep = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * keep, keep


def dropout_backward(dout: np.ndarray, keep: Optional[np.ndarray]) -> np.ndarray:
    return dout if keep is None else dout * keep


def scatter_rows(values: np.ndarray, active: np.ndarray, b: int, w: int) -> np.ndarray:
    """Place active-slot rows into a zero (b, w, c) array."""
    full = np.zeros((b * w, values.shape[1]), dtype=np.float64)
    full[active] = values
    return full.reshape(b, w, values.shape[1])


def summation_forward(h: np.ndarray) -> np.ndarray:
    """
    Sum (b, w, c) over the w positions, one position at a time.

    Accumulating slots in sequence order keeps the result bit-identical when
    trailing zero slots are appended.
    """
    total = np.zeros((h.shape[0], h.shape[2]), dtype=np.float64)
    for s in range(h.shape[1]):
        total += h[:, s, :]
    return total


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, targets: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean cross-entropy over the batch and its gradient w.r.t. logits."""
    b = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = float(-log_probs[np.arange(b), targets].mean())
    dlogits = np.exp(log_probs)
    dlogits[np.arange(b), targets] -= 1.0
    return loss, dlogits / b
