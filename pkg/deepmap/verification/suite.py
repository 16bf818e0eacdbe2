"""
Executable checks of the worked examples and the backward pass.
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np
import structlog

from ..alignment.sequence import DUMMY, receptive_field, vertex_sequence
from ..centrality.power import eigenvector_centrality
from ..errors import ArgumentError
from ..evaluation.kernels import gram_matrix, is_psd, stack_graph_features
from ..features.wl import wl_refine, wl_vertex_features
from ..network.gradcheck import grad_check
from ..types import CheckResult, GraphDataset, ModelConfig
from . import fixtures

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

CHECK_NAMES = ("centrality", "fields", "wl", "kernel", "grad")

GRAD_CHECK_CONFIG = ModelConfig(input_dim=2, field_size=2, sequence_len=3, class_count=3, dropout_rate=0.0)
GRAD_CHECK_TOLERANCE = 1e-6


def _names(order: Sequence[int], names: str) -> str:
    return "".join("_" if v == DUMMY else names[v] for v in order)


def check_centrality(pair: GraphDataset) -> CheckResult:
    details = []
    passed = True
    for graph, expected in zip(pair.graphs, (fixtures.CENTRALITY_1, fixtures.CENTRALITY_2)):
        scores = tuple(round(float(x), 2) for x in eigenvector_centrality(graph).scores)
        passed &= scores == expected
        details.append(f"{scores} vs {expected}")
    return CheckResult(name="centrality", passed=passed, detail="; ".join(details))


def check_fields(pair: GraphDataset) -> CheckResult:
    details = []
    passed = True
    w = pair.max_vertices
    cases = (
        (pair.graphs[0], fixtures.NAMES_1, fixtures.SEQUENCE_1, fixtures.FIELDS_1),
        (pair.graphs[1], fixtures.NAMES_2, fixtures.SEQUENCE_2, fixtures.FIELDS_2),
    )
    for graph, names, expected_sequence, expected_fields in cases:
        c = eigenvector_centrality(graph)
        sequence = _names(vertex_sequence(graph, c, w).order, names).rstrip("_")
        if sequence != expected_sequence:
            passed = False
            details.append(f"sequence {sequence} != {expected_sequence}")
        for center, expected in expected_fields.items():
            field = _names(receptive_field(graph, names.index(center), c, fixtures.FIELD_SIZE).members, names)
            if field != expected:
                passed = False
                details.append(f"field of {center}: {field} != {expected}")
    return CheckResult(name="fields", passed=passed, detail="; ".join(details) or "all fields match")


def check_wl(pair: GraphDataset) -> CheckResult:
    refinement = wl_refine(pair, 1)
    labels = tuple(tuple(int(x) for x in history[1]) for history in refinement.labels_per_iteration)
    dimension = wl_vertex_features(refinement, 0).dimension
    passed = labels == fixtures.WL_ITERATION_1_LABELS and dimension == fixtures.WL_DIMENSION
    return CheckResult(name="wl", passed=passed, detail=f"labels {labels}, dimension {dimension}")


def check_kernel(pair: GraphDataset) -> CheckResult:
    refinement = wl_refine(pair, 1)
    matrices = [wl_vertex_features(refinement, i) for i in range(len(pair))]
    gram = gram_matrix(stack_graph_features(matrices))
    cross = gram.values[0, 1]
    passed = cross == fixtures.WL_CROSS_KERNEL and is_psd(gram)
    return CheckResult(name="kernel", passed=passed, detail=f"K[0][1] = {cross:g}")


def check_grad(seed: int = 0) -> CheckResult:
    reports = [
        grad_check(GRAD_CHECK_CONFIG, seed, GRAD_CHECK_TOLERANCE),
        grad_check(GRAD_CHECK_CONFIG, seed, GRAD_CHECK_TOLERANCE, zero_input=True),
    ]
    passed = all(r.passed for r in reports)
    failing = sorted({name for r in reports for name in r.failing_groups})
    detail = f"max relative error {max(r.max_error for r in reports):.3e}"
    if failing:
        detail += f", failing: {', '.join(failing)}"
    return CheckResult(name="grad", passed=passed, detail=detail)


def run_suite(
    only: Optional[Sequence[str]] = None, fixture_dir: Optional[PathLike] = None, seed: int = 0
) -> List[CheckResult]:
    """
    Run the selected checks (all by default).

    Args:
        only: Check names to run
        fixture_dir: TU directory overriding the bundled fixture graphs
        seed: Seed of the gradient check

    Returns:
        One CheckResult per check, in CHECK_NAMES order
    """
    selected = list(CHECK_NAMES) if not only else list(only)
    unknown = [name for name in selected if name not in CHECK_NAMES]
    if unknown:
        raise ArgumentError(f"Unknown checks {unknown}; choose from {list(CHECK_NAMES)}")

    if fixture_dir is not None:
        wl, centrality = fixtures.load_fixtures(fixture_dir)
    else:
        wl, centrality = fixtures.wl_pair(), fixtures.centrality_pair()

    checks: Dict[str, Callable[[], CheckResult]] = {
        "centrality": lambda: check_centrality(centrality),
        "fields": lambda: check_fields(centrality),
        "wl": lambda: check_wl(wl),
        "kernel": lambda: check_kernel(wl),
        "grad": lambda: check_grad(seed),
    }
    results = []
    for name in CHECK_NAMES:
        if name in selected:
            result = checks[name]()
            logger.info("check_completed", check=name, passed=result.passed)
            results.append(result)
    return results
