"""
Graph kernels, baseline classifiers and cross-validation.
"""

from .cross_validation import cross_validate, select_best_epoch
from .folds import stratified_kfold
from .kernels import gram_matrix, is_psd, min_eigenvalue, normalize_features, stack_graph_features
from .logreg import LogRegModel, logreg_loss_and_grad, logreg_predict, logreg_train
from .pipelines import PIPELINE_NAMES, DeepMapPipeline, KernelPipeline, MajorityPipeline, Pipeline, pipeline_from_config
from .report import curves_frame, format_text_report, report_row, reports_frame, write_report_csv

__all__ = [
    "DeepMapPipeline",
    "KernelPipeline",
    "LogRegModel",
    "MajorityPipeline",
    "PIPELINE_NAMES",
    "Pipeline",
    "cross_validate",
    "curves_frame",
    "format_text_report",
    "gram_matrix",
    "is_psd",
    "logreg_loss_and_grad",
    "logreg_predict",
    "logreg_train",
    "min_eigenvalue",
    "normalize_features",
    "pipeline_from_config",
    "report_row",
    "reports_frame",
    "select_best_epoch",
    "stack_graph_features",
    "stratified_kfold",
    "write_report_csv",
]
