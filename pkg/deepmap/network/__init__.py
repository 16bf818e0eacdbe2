"""
From-scratch convolutional network over aligned receptive fields.
"""

from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import grad_check
from .model import Model, accuracy, forward, init_model, loss_and_gradients, predict
from .optimizer import PlateauScheduler, RmsPropState, init_rmsprop_state, rmsprop_step
from .trainer import train

__all__ = [
    "Model",
    "PlateauScheduler",
    "RmsPropState",
    "accuracy",
    "forward",
    "grad_check",
    "init_model",
    "init_rmsprop_state",
    "load_checkpoint",
    "loss_and_gradients",
    "predict",
    "rmsprop_step",
    "save_checkpoint",
    "train",
]
