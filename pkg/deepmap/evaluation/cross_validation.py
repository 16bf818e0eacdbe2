"""
Stratified k-fold cross-validation harness.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np
import structlog

from ..types import CrossValidationReport, FoldOutcome, GraphDataset
from ..utils.logging import log_fold
from ..utils.metrics import PipelineMetrics, Stopwatch
from .folds import stratified_kfold
from .pipelines import Pipeline

logger = structlog.get_logger(__name__)


def select_best_epoch(curves: np.ndarray) -> int:
    """1-based epoch with the highest mean accuracy over folds; earliest wins ties."""
    return int(np.argmax(curves.mean(axis=0))) + 1


def cross_validate(
    pipeline: Pipeline,
    dataset: GraphDataset,
    k: int = 10,
    seed: int = 0,
    threads: int = 1,
    metrics: Optional[PipelineMetrics] = None,
) -> CrossValidationReport:
    """
    Run a pipeline on every fold of a stratified split.

    Folds run concurrently on up to `threads` workers; outcomes are ordered
    by fold before aggregation. For network pipelines the reported fold
    accuracies are those of the epoch with the best mean test accuracy.

    Args:
        pipeline: Pipeline descriptor
        dataset: Labeled graphs
        k: Number of folds
        seed: Seed of the split
        threads: Worker cap
        metrics: Optional run metrics

    Returns:
        CrossValidationReport with population standard deviation
    """
    plan = stratified_kfold(dataset.class_labels, k, seed)
    kind, params = pipeline.describe()
    logger.info("cross_validation_started", pipeline=pipeline.name, kind=kind, params=params, folds=k, seed=seed)

    with Stopwatch() as stopwatch:
        pipeline.prepare(dataset)

        def run(fold: int) -> FoldOutcome:
            train_idx, test_idx = plan.split(fold)
            outcome = pipeline.run_fold(dataset, fold, train_idx, test_idx, threads)
            log_fold(logger, outcome, pipeline=pipeline.name)
            if metrics is not None:
                metrics.record_fold(pipeline.name)
            return outcome

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes: List[FoldOutcome] = list(pool.map(run, range(k)))
        else:
            outcomes = [run(fold) for fold in range(k)]
    outcomes.sort(key=lambda o: o.fold)

    best_epoch = None
    mean_test_curve: List[float] = []
    mean_train_curve: List[float] = []
    if outcomes[0].test_accuracy_curve:
        test_curves = np.array([o.test_accuracy_curve for o in outcomes])
        train_curves = np.array([o.train_accuracy_curve for o in outcomes])
        best_epoch = select_best_epoch(test_curves)
        fold_accuracies = [float(x) for x in test_curves[:, best_epoch - 1]]
        mean_test_curve = [float(x) for x in test_curves.mean(axis=0)]
        mean_train_curve = [float(x) for x in train_curves.mean(axis=0)]
    else:
        fold_accuracies = [o.accuracy for o in outcomes]

    eigenvalues = [o.min_eigenvalue for o in outcomes if o.min_eigenvalue is not None]
    psd_flags = [o.psd for o in outcomes if o.psd is not None]
    report = CrossValidationReport(
        pipeline=pipeline.name,
        kind=kind,
        params=params,
        fold_accuracies=fold_accuracies,
        mean_accuracy=float(np.mean(fold_accuracies)),
        std_accuracy=float(np.std(fold_accuracies)),
        best_epoch=best_epoch,
        mean_test_accuracy_curve=mean_test_curve,
        mean_train_accuracy_curve=mean_train_curve,
        min_eigenvalues=eigenvalues,
        psd=all(psd_flags) if psd_flags else None,
        wall_time_seconds=stopwatch.elapsed,
    )
    if metrics is not None:
        metrics.set_cv_accuracy(pipeline.name, report.mean_accuracy)
    logger.info(
        "cross_validation_completed",
        pipeline=pipeline.name,
        mean_accuracy=round(report.mean_accuracy, 4),
        std_accuracy=round(report.std_accuracy, 4),
        best_epoch=best_epoch,
    )
    return report
