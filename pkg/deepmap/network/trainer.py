"""
Mini-batch training loop.
"""

from typing import Callable, Optional, Sequence

import numpy as np
import structlog

from ..errors import ArgumentError
from ..types import AlignedTensor, EpochRecord, TrainConfig, TrainingHistory
from ..utils.logging import log_epoch
from ..utils.metrics import PipelineMetrics, Stopwatch
from .model import Model, accuracy, check_tensor, loss_and_gradients
from .optimizer import PlateauScheduler, init_rmsprop_state, rmsprop_step

logger = structlog.get_logger(__name__)

EvalCallback = Callable[[Model], float]


def train(
    model: Model,
    tensor: AlignedTensor,
    class_labels: Sequence[int],
    config: TrainConfig,
    indices: Optional[Sequence[int]] = None,
    eval_fn: Optional[EvalCallback] = None,
    metrics: Optional[PipelineMetrics] = None,
) -> TrainingHistory:
    """
    Train with RMSprop and plateau decay on the training loss.

    Args:
        model: Network, updated in place
        tensor: Aligned inputs
        class_labels: Label of every tensor graph
        config: Optimizer and schedule settings
        indices: Graphs to train on; all by default
        eval_fn: Called after every epoch, its value is stored as test accuracy
        metrics: Optional run metrics

    Returns:
        TrainingHistory with one record per epoch
    """
    labels = np.asarray(class_labels, dtype=np.int64)
    if len(labels) != tensor.n:
        raise ArgumentError(f"Got {len(labels)} labels for {tensor.n} graphs")
    check_tensor(model, tensor)
    train_ids = np.arange(tensor.n) if indices is None else np.asarray(indices, dtype=np.int64)
    if len(train_ids) == 0:
        raise ArgumentError("Cannot train on an empty dataset")

    shuffle_rng = np.random.default_rng(config.seed)
    state = init_rmsprop_state(model, config.rmsprop_rho, config.rmsprop_eps)
    scheduler = PlateauScheduler(lr=config.learning_rate, factor=config.decay_factor, patience=config.patience)
    history = TrainingHistory()

    for epoch in range(1, config.max_epochs + 1):
        lr = scheduler.lr
        order = train_ids[shuffle_rng.permutation(len(train_ids))]
        batch_losses = []
        with Stopwatch() as stopwatch:
            for start in range(0, len(order), config.batch_size):
                batch = order[start : start + config.batch_size]
                loss, grads = loss_and_gradients(
                    model, tensor.rows_for(batch), labels[batch], train_mode=True, mask=tensor.mask_for(batch)
                )
                rmsprop_step(model, grads, state, lr)
                batch_losses.append(loss)
        epoch_loss = float(np.mean(batch_losses))
        record = EpochRecord(
            epoch=epoch,
            loss=epoch_loss,
            accuracy=accuracy(model, tensor, labels, train_ids),
            lr=lr,
            test_accuracy=None if eval_fn is None else eval_fn(model),
        )
        history.records.append(record)
        if metrics is not None:
            metrics.record_epoch(record.loss, record.accuracy, lr, stopwatch.elapsed)
        log_epoch(logger, record)
        scheduler.step(epoch_loss)

    return history
