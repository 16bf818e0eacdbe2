"""
Logging and run metrics shared by the pipeline stages.
"""

from .logging import get_logger, log_epoch, log_error, log_fold, setup_logging
from .metrics import PipelineMetrics, Stopwatch

__all__ = [
    "PipelineMetrics",
    "Stopwatch",
    "get_logger",
    "log_epoch",
    "log_error",
    "log_fold",
    "setup_logging",
]
