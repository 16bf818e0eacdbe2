"""
Synthetic labeled graph datasets built from Erdős–Rényi graphs.

Each class owns one planted motif, itself an ER graph. A sample of that class
is a lightly perturbed copy of the motif wired into an ER noise component, so
classes share the same global edge density but differ in local structure.
"""

from typing import FrozenSet, List, Sequence, Set, Tuple

import numpy as np
import structlog

from ..errors import ArgumentError
from ..types import Graph, GraphDataset

logger = structlog.get_logger(__name__)

Edge = Tuple[int, int]

# Probability that a motif edge is dropped in one sample.
EDGE_DROP_PROB = 0.05
# Probability that one extra random edge is added to a motif copy.
EDGE_ADD_PROB = 0.5
MAX_MOTIF_ATTEMPTS = 1000


def erdos_renyi_edges(n: int, p: float, rng: np.random.Generator) -> List[Edge]:
    """Edges of a G(n, p) sample, each unordered pair included independently."""
    if n < 2:
        return []
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(len(rows)) < p
    return [(int(u), int(v)) for u, v in zip(rows[keep], cols[keep])]


def _plant_motifs(classes: int, size: int, p: float, rng: np.random.Generator) -> List[FrozenSet[Edge]]:
    motifs: List[FrozenSet[Edge]] = []
    attempts = 0
    while len(motifs) < classes:
        attempts += 1
        if attempts > MAX_MOTIF_ATTEMPTS:
            raise ArgumentError(
                f"Could not draw {classes} distinct motifs of size {size} with edge probability {p}"
            )
        edges = frozenset(erdos_renyi_edges(size, p, rng))
        if edges and edges not in motifs:
            motifs.append(edges)
    return motifs


def _perturb(motif: FrozenSet[Edge], size: int, rng: np.random.Generator) -> Set[Edge]:
    edges = {e for e in sorted(motif) if rng.random() >= EDGE_DROP_PROB}
    if rng.random() < EDGE_ADD_PROB:
        u, v = sorted(int(x) for x in rng.choice(size, size=2, replace=False))
        edges.add((u, v))
    return edges


def _sample_graph(
    motif: FrozenSet[Edge],
    motif_size: int,
    num_vertices: int,
    p: float,
    rng: np.random.Generator,
) -> Graph:
    edges = _perturb(motif, motif_size, rng)
    num_noise = num_vertices - motif_size
    if num_noise > 0:
        for u, v in erdos_renyi_edges(num_noise, p, rng):
            edges.add((motif_size + u, motif_size + v))
        for _ in range(1 + num_noise // 10):
            anchor = int(rng.integers(motif_size))
            target = motif_size + int(rng.integers(num_noise))
            edges.add((anchor, target))
    return Graph.from_edges(num_vertices, sorted(edges))


def generate_er_dataset(
    num_graphs: int,
    classes: int,
    size_range: Sequence[int],
    edge_prob: float,
    seed: int,
    name: str = "synthetic",
) -> GraphDataset:
    """
    Generate a balanced multi-class dataset of ER graphs with planted class motifs.

    Args:
        num_graphs: Total number of graphs
        classes: Number of classes, at least 2
        size_range: Inclusive [min, max] vertex count, min at least 3
        edge_prob: Edge probability in (0, 1) for motifs and noise
        seed: Seed of the only random stream used
        name: Dataset name

    Returns:
        Dataset with degree + 1 vertex labels and per-class counts differing by at most 1
    """
    if classes < 2:
        raise ArgumentError("Classes must be at least 2")
    if not 0.0 < edge_prob < 1.0:
        raise ArgumentError(f"Edge probability must be in (0, 1), got {edge_prob}")
    if len(size_range) != 2:
        raise ArgumentError("Size range must be [min, max]")
    min_size, max_size = int(size_range[0]), int(size_range[1])
    if min_size > max_size:
        raise ArgumentError(f"Size range is inverted: [{min_size}, {max_size}]")
    if min_size < 3:
        raise ArgumentError("Minimum graph size must be at least 3")
    if num_graphs < classes:
        raise ArgumentError(f"Need at least one graph per class, got {num_graphs} graphs for {classes} classes")

    rng = np.random.default_rng(seed)
    motifs = _plant_motifs(classes, min_size, edge_prob, rng)

    class_labels = np.repeat(np.arange(classes), num_graphs // classes)
    class_labels = np.concatenate([class_labels, np.arange(num_graphs % classes)])
    class_labels = class_labels[rng.permutation(num_graphs)]

    graphs = []
    for label in class_labels:
        num_vertices = int(rng.integers(min_size, max_size + 1))
        graphs.append(_sample_graph(motifs[label], min_size, num_vertices, edge_prob, rng))

    dataset = GraphDataset(
        graphs=tuple(graphs),
        class_labels=tuple(int(c) for c in class_labels),
        class_count=classes,
        name=name,
    )
    logger.info(
        "synthetic_dataset_generated",
        graphs=num_graphs,
        classes=classes,
        size_range=[min_size, max_size],
        edge_prob=edge_prob,
        seed=seed,
    )
    return dataset
