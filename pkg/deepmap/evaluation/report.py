"""
Text and CSV renderings of cross-validation reports.
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import pandas as pd

from ..types import CrossValidationReport

PathLike = Union[str, Path]

ROW_COLUMNS = ["pipeline", "kind", "params", "fold_accuracies", "mean", "std", "wall_time_seconds"]


def format_params(params: Dict[str, Any]) -> str:
    return " ".join(f"{name}={params[name]}" for name in sorted(params))


def format_text_report(report: CrossValidationReport) -> str:
    """Key-value report; wall time is left out so reruns are byte-identical."""
    lines = [
        f"pipeline: {report.pipeline}",
        f"kind: {report.kind or '-'}",
        f"params: {format_params(report.params) or '-'}",
        f"folds: {len(report.fold_accuracies)}",
    ]
    lines.extend(f"fold_{i}: {acc:.6f}" for i, acc in enumerate(report.fold_accuracies, start=1))
    lines.append(f"mean_accuracy: {report.mean_accuracy:.6f}")
    lines.append(f"std_accuracy: {report.std_accuracy:.6f}")
    if report.best_epoch is not None:
        lines.append(f"best_epoch: {report.best_epoch}")
    if report.psd is not None:
        lines.append(f"gram_psd: {str(report.psd).lower()}")
        lines.append(f"gram_min_eigenvalue: {min(report.min_eigenvalues):.6e}")
    return "\n".join(lines) + "\n"


def report_row(report: CrossValidationReport) -> Dict[str, Any]:
    return {
        "pipeline": report.pipeline,
        "kind": report.kind or "",
        "params": format_params(report.params),
        "fold_accuracies": ";".join(f"{acc:.6f}" for acc in report.fold_accuracies),
        "mean": round(report.mean_accuracy, 6),
        "std": round(report.std_accuracy, 6),
        "wall_time_seconds": round(report.wall_time_seconds, 3),
    }


def reports_frame(reports: Sequence[CrossValidationReport]) -> pd.DataFrame:
    return pd.DataFrame([report_row(r) for r in reports], columns=ROW_COLUMNS)


def write_report_csv(path: PathLike, reports: Sequence[CrossValidationReport]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    reports_frame(reports).to_csv(path, index=False)
    return path


def curves_frame(report: CrossValidationReport) -> pd.DataFrame:
    """Per-epoch mean test and train accuracy over folds (1-based epochs)."""
    epochs: List[int] = list(range(1, len(report.mean_test_accuracy_curve) + 1))
    return pd.DataFrame(
        {
            "epoch": epochs,
            "mean_test_accuracy": report.mean_test_accuracy_curve,
            "mean_train_accuracy": report.mean_train_accuracy_curve,
        }
    )
