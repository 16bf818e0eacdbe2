"""
DeepMap command-line interface.
"""

import functools
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np
import pandas as pd
import structlog
from rich.console import Console
from rich.table import Table

from .alignment import assemble_input, read_tensor, write_tensor
from .centrality import compute_centralities
from .config import Config, load_config, write_effective_config
from .errors import ArgumentError, OverwriteRefusedError, VerificationError, exit_code_for
from .evaluation import (
    PIPELINE_NAMES,
    cross_validate,
    curves_frame,
    format_text_report,
    pipeline_from_config,
    write_report_csv,
)
from .features import INDEX_FILE, FeatureExtractor, read_feature_matrices, write_feature_index, write_feature_matrices
from .graphs import generate_er_dataset, parse_tu_dataset, write_tu_dataset
from .network import init_model, load_checkpoint, predict as predict_classes, save_checkpoint, train as train_model
from .types import CrossValidationReport, FeatureKind, GraphDataset
from .utils.logging import log_error, setup_logging
from .utils.metrics import PipelineMetrics
from .verification import CHECK_NAMES, run_suite

console = Console()
logger = structlog.get_logger(__name__)

FEATURES_DIR = "features"


def handle_errors(command: Callable) -> Callable:
    """Turn pipeline errors into logged messages and exit codes."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as e:
            log_error(logger, e, {"command": command.__name__})
            console.print(f"[red]Error:[/red] {e}")
            sys.exit(exit_code_for(e))

    return wrapper


def _effective_config(ctx: click.Context, **overrides: Any) -> Config:
    config = load_config(ctx.obj.get("config_file"), {**ctx.obj.get("overrides", {}), **overrides})
    setup_logging(config.log_level, config.log_format)
    return config


def _prepare_output_dir(path: Path, force: bool) -> Path:
    if path.exists() and any(path.iterdir()) and not force:
        raise OverwriteRefusedError(str(path))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _prepare_output_file(path: Path, force: bool) -> Path:
    if path.exists() and not force:
        raise OverwriteRefusedError(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def feature_options(command: Callable) -> Callable:
    """--kind, --h, --k, --q shared by every featurizing command."""
    options = [
        click.option("--kind", type=click.Choice([k.value for k in FeatureKind]), help="Substructure family"),
        click.option("--h", "wl_iterations", type=int, help="WL iterations"),
        click.option("--k", "graphlet_size", type=int, help="Graphlet size"),
        click.option("--q", "graphlet_samples", type=int, help="Graphlet samples per vertex"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def dataset_options(command: Callable) -> Callable:
    """A TU dataset (--data/--name) or a generated one (--synthetic)."""
    options = [
        click.option("--data", "data_dir", type=click.Path(path_type=Path), help="TU dataset directory"),
        click.option("--name", "dataset_name", help="TU dataset name"),
        click.option("--synthetic", is_flag=True, help="Generate an ER dataset instead"),
        click.option("--graphs", "num_graphs", type=int, default=400, show_default=True),
        click.option("--classes", type=int, default=4, show_default=True),
        click.option("--min-size", type=int, default=20, show_default=True),
        click.option("--max-size", type=int, default=60, show_default=True),
        click.option("--p", "edge_prob", type=float, default=0.2, show_default=True),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _load_dataset(config: Config, data_dir: Optional[Path], dataset_name: Optional[str], synthetic: bool,
                  num_graphs: int, classes: int, min_size: int, max_size: int, edge_prob: float) -> GraphDataset:
    if synthetic == (data_dir is not None):
        raise ArgumentError("Give exactly one dataset source: --data/--name or --synthetic")
    if synthetic:
        return generate_er_dataset(num_graphs, classes, (min_size, max_size), edge_prob, config.seed)
    if not dataset_name:
        raise ArgumentError("--name is required with --data")
    return parse_tu_dataset(data_dir, dataset_name)


def _print_pairs(title: str, rows: Sequence[Sequence[Any]]) -> None:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    for name, value in rows:
        table.add_row(str(name), str(value))
    console.print(table)


def _print_cv_report(report: CrossValidationReport) -> None:
    table = Table(title=f"Cross-validation: {report.pipeline}")
    table.add_column("Fold", style="cyan")
    table.add_column("Accuracy", style="green")
    for fold, acc in enumerate(report.fold_accuracies, start=1):
        table.add_row(str(fold), f"{acc:.4f}")
    table.add_row("mean", f"{report.mean_accuracy:.4f}")
    table.add_row("std", f"{report.std_accuracy:.4f}")
    if report.best_epoch is not None:
        table.add_row("best epoch", str(report.best_epoch))
    if report.psd is not None:
        table.add_row("Gram PSD", str(report.psd))
    console.print(table)


@click.group()
@click.option("--config", "-c", "config_file", type=click.Path(path_type=Path), help="Flat key=value config file")
@click.option("--threads", type=int, help="Worker cap")
@click.option("--verbose", "-v", is_flag=True, help="Verbose output")
@click.pass_context
def cli(ctx: click.Context, config_file: Optional[Path], threads: Optional[int], verbose: bool) -> None:
    """DeepMap graph classification."""
    overrides: Dict[str, Any] = {"threads": threads}
    if verbose:
        overrides["log_level"] = "DEBUG"
    ctx.obj = {"config_file": config_file, "overrides": overrides}


@cli.command()
@click.option("--graphs", "num_graphs", type=int, default=400, show_default=True)
@click.option("--classes", type=int, default=4, show_default=True)
@click.option("--min-size", type=int, default=20, show_default=True)
@click.option("--max-size", type=int, default=60, show_default=True)
@click.option("--p", "edge_prob", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, help="Generator seed")
@click.option("--name", "dataset_name", default="synthetic", show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True, help="Overwrite existing files")
@click.pass_context
@handle_errors
def synth(ctx: click.Context, num_graphs: int, classes: int, min_size: int, max_size: int, edge_prob: float,
          seed: Optional[int], dataset_name: str, out_dir: Path, force: bool) -> None:
    """Generate a synthetic ER dataset in TU format."""
    config = _effective_config(ctx, seed=seed)
    existing = sorted(out_dir.glob(f"{dataset_name}_*.txt")) if out_dir.exists() else []
    if existing and not force:
        raise OverwriteRefusedError(str(existing[0]))
    dataset = generate_er_dataset(num_graphs, classes, (min_size, max_size), edge_prob, config.seed, dataset_name)
    write_tu_dataset(dataset, out_dir)
    write_effective_config(config, out_dir)
    _print_pairs("Synthetic dataset", [
        ("Graphs", len(dataset)),
        ("Classes", dataset.class_count),
        ("Max vertices", dataset.max_vertices),
        ("Output", out_dir),
    ])


@cli.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--name", "dataset_name", required=True)
@feature_options
@click.option("--seed", type=int)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def featurize(ctx: click.Context, data_dir: Path, dataset_name: str, kind: Optional[str],
              wl_iterations: Optional[int], graphlet_size: Optional[int], graphlet_samples: Optional[int],
              seed: Optional[int], out_dir: Path, force: bool) -> None:
    """Compute vertex feature maps and the shared feature index."""
    config = _effective_config(ctx, kind=kind, wl_iterations=wl_iterations, graphlet_size=graphlet_size,
                               graphlet_samples=graphlet_samples, seed=seed)
    dataset = parse_tu_dataset(data_dir, dataset_name)
    _prepare_output_dir(out_dir, force)
    extractor = FeatureExtractor(config.kind, config.feature_params(), config.threads)
    metrics = PipelineMetrics()
    matrices = extractor.fit_transform(dataset.graphs)
    write_feature_matrices(out_dir / FEATURES_DIR, matrices)
    write_feature_index(out_dir / INDEX_FILE, extractor.index)
    metrics.record_featurized(config.kind.value, len(matrices))
    metrics.write(out_dir / "metrics.prom")
    write_effective_config(config, out_dir)
    _print_pairs("Vertex feature maps", [
        ("Graphs", len(dataset)),
        ("Kind", config.kind.value),
        ("Dimension", extractor.index.dimension),
        ("Output", out_dir),
    ])


@cli.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--name", "dataset_name", required=True)
@click.option("--features", "features_dir", type=click.Path(path_type=Path), help="Output directory of featurize")
@feature_options
@click.option("--r", "field_size", type=int, help="Receptive field size")
@click.option("--seed", type=int)
@click.option("--out", "out_file", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def assemble(ctx: click.Context, data_dir: Path, dataset_name: str, features_dir: Optional[Path],
             kind: Optional[str], wl_iterations: Optional[int], graphlet_size: Optional[int],
             graphlet_samples: Optional[int], field_size: Optional[int], seed: Optional[int],
             out_file: Path, force: bool) -> None:
    """Assemble the aligned network input tensor."""
    config = _effective_config(ctx, kind=kind, wl_iterations=wl_iterations, graphlet_size=graphlet_size,
                               graphlet_samples=graphlet_samples, field_size=field_size, seed=seed)
    dataset = parse_tu_dataset(data_dir, dataset_name)
    _prepare_output_file(out_file, force)
    if features_dir is not None:
        matrices = read_feature_matrices(features_dir / FEATURES_DIR)
    else:
        matrices = FeatureExtractor(config.kind, config.feature_params(), config.threads).fit_transform(dataset.graphs)
    centralities = compute_centralities(dataset.graphs, config.centrality_tol, config.centrality_max_iter)
    tensor = assemble_input(dataset, matrices, centralities, config.field_size)
    write_tensor(out_file, tensor, dataset.class_labels, dataset.class_count)
    write_effective_config(config, out_file.parent)
    n, rows, m = tensor.shape
    _print_pairs("Aligned tensor", [("Shape", f"{n} x {rows} x {m}"), ("w", tensor.w), ("r", tensor.r),
                                    ("Output", out_file)])


@cli.command()
@click.option("--tensor", "tensor_file", type=click.Path(path_type=Path), required=True)
@click.option("--lr", "learning_rate", type=float)
@click.option("--decay", "decay_factor", type=float)
@click.option("--patience", type=int)
@click.option("--batch-size", type=int)
@click.option("--epochs", type=int)
@click.option("--seed", type=int)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def train(ctx: click.Context, tensor_file: Path, learning_rate: Optional[float], decay_factor: Optional[float],
          patience: Optional[int], batch_size: Optional[int], epochs: Optional[int], seed: Optional[int],
          out_dir: Path, force: bool) -> None:
    """Train the network; writes checkpoint, history and metrics."""
    config = _effective_config(ctx, learning_rate=learning_rate, decay_factor=decay_factor, patience=patience,
                               batch_size=batch_size, epochs=epochs, seed=seed)
    tensor, labels, class_count = read_tensor(tensor_file)
    _prepare_output_dir(out_dir, force)

    metrics = PipelineMetrics()
    model = init_model(config.model_config_for(tensor.m, tensor.w, class_count), config.seed)
    history = train_model(model, tensor, labels, config.train_config(), metrics=metrics)

    save_checkpoint(out_dir / "model.ckpt", model)
    history.to_frame().to_csv(out_dir / "history.csv", index=False)
    metrics.write(out_dir / "metrics.prom")
    write_effective_config(config, out_dir)
    final = history.records[-1]
    summary = [
        ("learning_rate", config.learning_rate),
        ("decay_factor", config.decay_factor),
        ("patience", config.patience),
        ("batch_size", config.batch_size),
        ("epochs", len(history)),
        ("final_loss", f"{final.loss:.6f}"),
        ("final_accuracy", f"{final.accuracy:.6f}"),
        ("final_lr", final.lr),
    ]
    (out_dir / "train_report.txt").write_text("".join(f"{k}: {v}\n" for k, v in summary), encoding="utf-8")
    _print_pairs("Training", summary)


@cli.command()
@click.option("--checkpoint", "checkpoint_file", type=click.Path(path_type=Path), required=True)
@click.option("--tensor", "tensor_file", type=click.Path(path_type=Path), required=True)
@click.option("--out", "out_file", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def predict(ctx: click.Context, checkpoint_file: Path, tensor_file: Path, out_file: Path, force: bool) -> None:
    """Predict classes of a tensor with a trained checkpoint."""
    _effective_config(ctx)
    model = load_checkpoint(checkpoint_file)
    tensor, labels, _ = read_tensor(tensor_file)
    _prepare_output_file(out_file, force)
    classes, probabilities = predict_classes(model, tensor)
    frame = pd.DataFrame({"graph": np.arange(tensor.n), "label": labels, "predicted": classes})
    for c in range(probabilities.shape[1]):
        frame[f"p{c}"] = probabilities[:, c]
    frame.to_csv(out_file, index=False)
    accuracy = float((classes == np.asarray(labels)).mean())
    _print_pairs("Predictions", [("Graphs", tensor.n), ("Accuracy", f"{accuracy:.4f}"), ("Output", out_file)])


@cli.command()
@dataset_options
@click.option("--pipeline", "pipeline_name", type=click.Choice(PIPELINE_NAMES), default="deepmap", show_default=True)
@feature_options
@click.option("--r", "field_size", type=int)
@click.option("--folds", type=int)
@click.option("--lr", "learning_rate", type=float)
@click.option("--decay", "decay_factor", type=float)
@click.option("--patience", type=int)
@click.option("--batch-size", type=int)
@click.option("--epochs", type=int)
@click.option("--seed", type=int)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def cv(ctx: click.Context, data_dir: Optional[Path], dataset_name: Optional[str], synthetic: bool, num_graphs: int,
       classes: int, min_size: int, max_size: int, edge_prob: float, pipeline_name: str, kind: Optional[str],
       wl_iterations: Optional[int], graphlet_size: Optional[int], graphlet_samples: Optional[int],
       field_size: Optional[int], folds: Optional[int], learning_rate: Optional[float],
       decay_factor: Optional[float], patience: Optional[int], batch_size: Optional[int], epochs: Optional[int],
       seed: Optional[int], out_dir: Path, force: bool) -> None:
    """Stratified k-fold cross-validation of a pipeline."""
    config = _effective_config(ctx, kind=kind, wl_iterations=wl_iterations, graphlet_size=graphlet_size,
                               graphlet_samples=graphlet_samples, field_size=field_size, folds=folds,
                               learning_rate=learning_rate, decay_factor=decay_factor, patience=patience,
                               batch_size=batch_size, epochs=epochs, seed=seed)
    dataset = _load_dataset(config, data_dir, dataset_name, synthetic, num_graphs, classes, min_size, max_size,
                            edge_prob)
    _prepare_output_dir(out_dir, force)

    metrics = PipelineMetrics()
    report = cross_validate(pipeline_from_config(pipeline_name, config), dataset, config.folds, config.seed,
                            config.threads, metrics)
    (out_dir / "report.txt").write_text(format_text_report(report), encoding="utf-8")
    write_report_csv(out_dir / "report.csv", [report])
    if report.mean_test_accuracy_curve:
        curves_frame(report).to_csv(out_dir / "curves.csv", index=False)
    metrics.write(out_dir / "metrics.prom")
    write_effective_config(config, out_dir)
    _print_cv_report(report)


@cli.command()
@dataset_options
@click.option("--r-values", default="1,3,5,7", show_default=True, help="Comma-separated receptive field sizes")
@feature_options
@click.option("--folds", type=int)
@click.option("--epochs", type=int)
@click.option("--seed", type=int)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--force", is_flag=True)
@click.pass_context
@handle_errors
def sweep(ctx: click.Context, data_dir: Optional[Path], dataset_name: Optional[str], synthetic: bool,
          num_graphs: int, classes: int, min_size: int, max_size: int, edge_prob: float, r_values: str,
          kind: Optional[str], wl_iterations: Optional[int], graphlet_size: Optional[int],
          graphlet_samples: Optional[int], folds: Optional[int], epochs: Optional[int], seed: Optional[int],
          out_dir: Path, force: bool) -> None:
    """Sensitivity of DeepMap to the receptive field size, next to the kernel baseline."""
    try:
        sizes = [int(x) for x in r_values.split(",") if x.strip()]
    except ValueError as e:
        raise ArgumentError(f"--r-values must be comma-separated integers: {e}") from e
    if not sizes:
        raise ArgumentError("--r-values is empty")
    config = _effective_config(ctx, kind=kind, wl_iterations=wl_iterations, graphlet_size=graphlet_size,
                               graphlet_samples=graphlet_samples, folds=folds, epochs=epochs, seed=seed)
    dataset = _load_dataset(config, data_dir, dataset_name, synthetic, num_graphs, classes, min_size, max_size,
                            edge_prob)
    _prepare_output_dir(out_dir, force)

    metrics = PipelineMetrics()
    reports: List[CrossValidationReport] = [
        cross_validate(pipeline_from_config("kernel", config), dataset, config.folds, config.seed,
                       config.threads, metrics)
    ]
    for r in sizes:
        swept = config.model_copy(update={"field_size": r})
        reports.append(cross_validate(pipeline_from_config("deepmap", swept), dataset, config.folds, config.seed,
                                      config.threads, metrics))
    write_report_csv(out_dir / "sweep.csv", reports)
    metrics.write(out_dir / "metrics.prom")
    write_effective_config(config, out_dir)

    table = Table(title="Receptive field sweep")
    table.add_column("Pipeline", style="cyan")
    table.add_column("Params")
    table.add_column("Mean", style="green")
    table.add_column("Std")
    for report in reports:
        params = " ".join(f"{k}={v}" for k, v in sorted(report.params.items()))
        table.add_row(report.pipeline, params, f"{report.mean_accuracy:.4f}", f"{report.std_accuracy:.4f}")
    console.print(table)


@cli.command()
@click.option("--only", multiple=True, type=click.Choice(CHECK_NAMES), help="Run only these checks")
@click.option("--fixture-dir", type=click.Path(path_type=Path), help="TU directory replacing the bundled fixtures")
@click.option("--seed", type=int)
@click.pass_context
@handle_errors
def verify(ctx: click.Context, only: Sequence[str], fixture_dir: Optional[Path], seed: Optional[int]) -> None:
    """Check the worked examples and the backward pass."""
    config = _effective_config(ctx, seed=seed)
    results = run_suite(list(only) or None, fixture_dir, config.seed)

    table = Table(title="Verification")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Detail")
    for result in results:
        table.add_row(result.name, "[green]pass[/green]" if result.passed else "[red]FAIL[/red]", result.detail)
    console.print(table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationError(failed)


if __name__ == "__main__":
    cli()
