"""
Prometheus metrics for DeepMap runs.

Runs are batch jobs, so metrics live in a private registry and are written
as a textfile-collector file instead of being served over HTTP.
"""

import time
from pathlib import Path
from typing import Optional, Union

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, generate_latest, write_to_textfile


class PipelineMetrics:
    """Counters, gauges and timings of one command invocation."""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        """Initialize metrics."""
        self.registry = registry or CollectorRegistry()

        # Counters
        self.graphs_featurized_total = Counter(
            "deepmap_graphs_featurized_total",
            "Graphs whose vertex feature maps were computed",
            ["kind"],
            registry=self.registry,
        )

        self.epochs_total = Counter(
            "deepmap_epochs_total",
            "Training epochs completed",
            registry=self.registry,
        )

        self.folds_total = Counter(
            "deepmap_folds_total",
            "Cross-validation folds completed",
            ["pipeline"],
            registry=self.registry,
        )

        # Gauges
        self.train_loss = Gauge(
            "deepmap_train_loss",
            "Mean training loss of the latest epoch",
            registry=self.registry,
        )

        self.train_accuracy = Gauge(
            "deepmap_train_accuracy",
            "Training accuracy of the latest epoch",
            registry=self.registry,
        )

        self.learning_rate = Gauge(
            "deepmap_learning_rate",
            "Learning rate of the latest epoch",
            registry=self.registry,
        )

        self.cv_mean_accuracy = Gauge(
            "deepmap_cv_mean_accuracy",
            "Mean cross-validation accuracy",
            ["pipeline"],
            registry=self.registry,
        )

        # Histograms
        self.epoch_seconds = Histogram(
            "deepmap_epoch_seconds",
            "Wall time of one training epoch",
            buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 60.0],
            registry=self.registry,
        )

    def record_featurized(self, kind: str, count: int = 1) -> None:
        """Record graphs featurized."""
        self.graphs_featurized_total.labels(kind=kind).inc(count)

    def record_epoch(self, loss: float, accuracy: float, lr: float, seconds: float) -> None:
        """Record a completed epoch."""
        self.epochs_total.inc()
        self.train_loss.set(loss)
        self.train_accuracy.set(accuracy)
        self.learning_rate.set(lr)
        self.epoch_seconds.observe(seconds)

    def record_fold(self, pipeline: str) -> None:
        """Record a completed fold."""
        self.folds_total.labels(pipeline=pipeline).inc()

    def set_cv_accuracy(self, pipeline: str, accuracy: float) -> None:
        """Set the mean CV accuracy."""
        self.cv_mean_accuracy.labels(pipeline=pipeline).set(accuracy)

    def get_metrics(self) -> str:
        """Get metrics in Prometheus exposition format."""
        return generate_latest(self.registry).decode("utf-8")

    def write(self, path: Union[str, Path]) -> Path:
        """Write metrics to a textfile."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        return path


class Stopwatch:
    """Context manager measuring wall time with a monotonic clock."""

    def __init__(self) -> None:
        self.start_time: Optional[float] = None
        self.elapsed: float = 0.0

    def __enter__(self) -> "Stopwatch":
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self.start_time is not None:
            self.elapsed = time.perf_counter() - self.start_time
