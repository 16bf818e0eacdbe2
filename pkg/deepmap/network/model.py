"""
Convolutional network over aligned receptive fields.

conv1 maps each receptive-field block of r rows (r * m values) to c1
channels, which is a kernel-length-r, stride-r convolution. conv2 and conv3
are kernel-length-1 convolutions. Each is followed by ReLU. The summation
layer adds the w positions, then dense + ReLU, inverted dropout and a final
dense layer produce C logits.

Convolutions run on non-dummy slots only; dummy slots contribute exact zeros
to the summation, so padding never changes the output.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from ..errors import ArgumentError
from ..types import AlignedTensor, ModelConfig
from .layers import (
    affine_backward,
    affine_forward,
    dropout_backward,
    dropout_forward,
    glorot_uniform,
    relu_backward,
    relu_forward,
    scatter_rows,
    softmax,
    softmax_cross_entropy,
    summation_forward,
)

PARAM_NAMES = (
    "conv1_w", "conv1_b",
    "conv2_w", "conv2_b",
    "conv3_w", "conv3_b",
    "dense1_w", "dense1_b",
    "dense2_w", "dense2_b",
)

PREDICT_BATCH = 256

Batch = Union[np.ndarray, sparse.spmatrix]


@dataclass
class Model:
    """Network parameters plus the random stream used for dropout."""
    config: ModelConfig
    params: Dict[str, np.ndarray]
    rng: np.random.Generator

    @property
    def parameter_count(self) -> int:
        return int(sum(p.size for p in self.params.values()))


def parameter_shapes(config: ModelConfig) -> Dict[str, Tuple[int, ...]]:
    """Shape of every parameter tensor, in declaration order."""
    c1, c2, c3 = config.conv_channels
    fan_in = config.field_size * config.input_dim
    return {
        "conv1_w": (fan_in, c1), "conv1_b": (c1,),
        "conv2_w": (c1, c2), "conv2_b": (c2,),
        "conv3_w": (c2, c3), "conv3_b": (c3,),
        "dense1_w": (c3, config.dense_units), "dense1_b": (config.dense_units,),
        "dense2_w": (config.dense_units, config.class_count), "dense2_b": (config.class_count,),
    }


def init_model(config: ModelConfig, seed: int = 0) -> Model:
    """Glorot-uniform weights and zero biases."""
    rng = np.random.default_rng(seed)
    params: Dict[str, np.ndarray] = {}
    for name, shape in parameter_shapes(config).items():
        if name.endswith("_w"):
            params[name] = glorot_uniform(shape[0], shape[1], rng)
        else:
            params[name] = np.zeros(shape, dtype=np.float64)
    return Model(config=config, params=params, rng=rng)


def _as_rows(model: Model, batch: Batch, mask: Optional[np.ndarray]) -> Tuple[Batch, np.ndarray]:
    """
    Normalize a batch to (b * w, r * m) rows plus a (b, w) slot mask.

    Dense batches are (b, w * r, m) arrays, sparse batches are already
    (b * w, r * m) rows. Both need the mask: a real vertex may have an
    all-zero feature row, so dummies cannot be told apart by their values.
    """
    config = model.config
    r, m = config.field_size, config.input_dim
    if mask is None:
        raise ArgumentError("Batches need a (b, w) slot mask")
    if sparse.issparse(batch):
        if batch.shape[1] != r * m:
            raise ArgumentError(f"Batch rows have width {batch.shape[1]}, expected r * m = {r * m}")
        if batch.shape[0] != mask.size:
            raise ArgumentError("Slot mask does not match the batch")
        return batch.tocsr(), np.asarray(mask, dtype=bool)

    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 3 or batch.shape[2] != m or batch.shape[1] % r != 0:
        raise ArgumentError(f"Batch shape {batch.shape} does not fit r = {r}, m = {m}")
    b, w = batch.shape[0], batch.shape[1] // r
    rows = batch.reshape(b * w, r * m)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (b, w):
        raise ArgumentError(f"Slot mask shape {mask.shape} does not match batch ({b}, {w})")
    return rows, mask


def forward(
    model: Model, batch: Batch, train_mode: bool = False, mask: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, Dict[str, Any]]:
    """
    Logits of a batch.

    Args:
        model: Network
        batch: (b, w * r, m) array or (b * w, r * m) sparse rows
        train_mode: Apply dropout
        mask: (b, w) non-dummy slots

    Returns:
        (logits (b, C), cache for backpropagation)
    """
    p = model.params
    rows, mask = _as_rows(model, batch, mask)
    b, w = mask.shape
    active = np.flatnonzero(mask.ravel())
    x1 = rows[active]

    z1 = affine_forward(x1, p["conv1_w"], p["conv1_b"])
    a1 = relu_forward(z1)
    z2 = affine_forward(a1, p["conv2_w"], p["conv2_b"])
    a2 = relu_forward(z2)
    z3 = affine_forward(a2, p["conv3_w"], p["conv3_b"])
    a3 = relu_forward(z3)

    conv3 = scatter_rows(a3, active, b, w)
    pooled = summation_forward(conv3)
    z4 = affine_forward(pooled, p["dense1_w"], p["dense1_b"])
    a4 = relu_forward(z4)
    dropped, keep = dropout_forward(a4, model.config.dropout_rate, model.rng, train_mode)
    logits = affine_forward(dropped, p["dense2_w"], p["dense2_b"])

    cache = {
        "b": b, "w": w, "active": active, "x1": x1,
        "z1": z1, "a1": a1, "z2": z2, "a2": a2, "z3": z3,
        "conv1": scatter_rows(a1, active, b, w),
        "conv2": scatter_rows(a2, active, b, w),
        "conv3": conv3,
        "pooled": pooled, "z4": z4, "a4": a4, "keep": keep, "dropped": dropped,
    }
    return logits, cache


def backward(model: Model, dlogits: np.ndarray, cache: Dict[str, Any]) -> Dict[str, np.ndarray]:
    """Parameter gradients given dLoss/dlogits."""
    p = model.params
    grads: Dict[str, np.ndarray] = {}

    ddropped, grads["dense2_w"], grads["dense2_b"] = affine_backward(dlogits, cache["dropped"], p["dense2_w"])
    da4 = dropout_backward(ddropped, cache["keep"])
    dz4 = relu_backward(da4, cache["z4"])
    dpooled, grads["dense1_w"], grads["dense1_b"] = affine_backward(dz4, cache["pooled"], p["dense1_w"])

    # The summation hands every position of graph g the gradient of g's pooled vector.
    da3 = dpooled[cache["active"] // cache["w"]]
    dz3 = relu_backward(da3, cache["z3"])
    da2, grads["conv3_w"], grads["conv3_b"] = affine_backward(dz3, cache["a2"], p["conv3_w"])
    dz2 = relu_backward(da2, cache["z2"])
    da1, grads["conv2_w"], grads["conv2_b"] = affine_backward(dz2, cache["a1"], p["conv2_w"])
    dz1 = relu_backward(da1, cache["z1"])
    grads["conv1_w"] = np.asarray(cache["x1"].T @ dz1)
    grads["conv1_b"] = dz1.sum(axis=0)
    return {name: grads[name] for name in PARAM_NAMES}


def loss_and_gradients(
    model: Model,
    batch: Batch,
    class_targets: np.ndarray,
    train_mode: bool = False,
    mask: Optional[np.ndarray] = None,
) -> Tuple[float, Dict[str, np.ndarray]]:
    """Mean softmax cross-entropy and its gradient for every parameter."""
    targets = np.asarray(class_targets, dtype=np.int64)
    logits, cache = forward(model, batch, train_mode, mask)
    if targets.shape != (logits.shape[0],):
        raise ArgumentError(f"Expected {logits.shape[0]} targets, got {targets.shape}")
    if targets.size and (targets.min() < 0 or targets.max() >= model.config.class_count):
        raise ArgumentError(f"Targets must lie in [0, {model.config.class_count})")
    loss, dlogits = softmax_cross_entropy(logits, targets)
    return loss, backward(model, dlogits, cache)


def check_tensor(model: Model, tensor: AlignedTensor) -> None:
    """Reject tensors whose field size or feature dimension differ from the model's."""
    if tensor.r != model.config.field_size or tensor.m != model.config.input_dim:
        raise ArgumentError(
            f"Tensor has r = {tensor.r}, m = {tensor.m}; "
            f"model expects r = {model.config.field_size}, m = {model.config.input_dim}"
        )


def tensor_logits(model: Model, tensor: AlignedTensor, indices: Optional[np.ndarray] = None) -> np.ndarray:
    """Eval-mode logits of tensor graphs, in batches."""
    check_tensor(model, tensor)
    indices = np.arange(tensor.n) if indices is None else np.asarray(indices, dtype=np.int64)
    chunks = []
    for start in range(0, len(indices), PREDICT_BATCH):
        chunk = indices[start : start + PREDICT_BATCH]
        logits, _ = forward(model, tensor.rows_for(chunk), False, tensor.mask_for(chunk))
        chunks.append(logits)
    if not chunks:
        return np.zeros((0, model.config.class_count))
    return np.concatenate(chunks, axis=0)


def predict(
    model: Model,
    tensor: Union[AlignedTensor, np.ndarray],
    indices: Optional[np.ndarray] = None,
    mask: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Class indices and probability rows, dropout disabled.

    Args:
        model: Trained network
        tensor: AlignedTensor or a dense (b, w * r, m) batch
        indices: Optional subset of tensor graphs
        mask: (b, w) non-dummy slots of a dense batch

    Returns:
        (classes (b,), probabilities (b, C))
    """
    if isinstance(tensor, AlignedTensor):
        logits = tensor_logits(model, tensor, indices)
    else:
        logits, _ = forward(model, tensor, train_mode=False, mask=mask)
    probabilities = softmax(logits)
    return probabilities.argmax(axis=1), probabilities


def accuracy(model: Model, tensor: AlignedTensor, labels: np.ndarray, indices: Optional[np.ndarray] = None) -> float:
    """Fraction of graphs whose predicted class equals the label."""
    classes, _ = predict(model, tensor, indices)
    targets = np.asarray(labels, dtype=np.int64)
    if indices is not None:
        targets = targets[np.asarray(indices, dtype=np.int64)]
    return float((classes == targets).mean()) if len(targets) else 0.0
