"""
Weisfeiler-Lehman subtree relabeling and vertex feature maps.

At every iteration a vertex's augmented string is its own label followed by
its neighbors' labels in ascending order, comma-separated. The distinct
strings of the whole dataset are sorted lexicographically and numbered
consecutively from (largest label so far + 1), so labels of different
iterations never collide.
"""

from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..errors import ArgumentError
from ..types import FeatureIndex, FeatureKind, Graph, GraphDataset, VertexFeatureMatrix, WlRefinement
from .counting import counts_to_matrix, index_from_keys

logger = structlog.get_logger(__name__)

# WL feature keys are (iteration, compressed label).
WlKey = Tuple[int, int]


def augmented_strings(g: Graph, labels: np.ndarray) -> List[str]:
    """Per-vertex "own,sorted neighbors" strings."""
    strings = []
    for v, neighbors in enumerate(g.adjacency):
        parts = [int(labels[v])] + sorted(int(labels[u]) for u in neighbors)
        strings.append(",".join(str(x) for x in parts))
    return strings


class WlRefiner:
    """
    Learns WL compression tables on one set of graphs and applies them to others.

    Strings never seen during fit receive fresh labels above every fitted
    label, so they can never share a feature column with training labels.
    """

    def __init__(self, h: int):
        if h < 0:
            raise ArgumentError(f"WL iterations must be non-negative, got {h}")
        self.h = h
        self.tables: List[Dict[str, int]] = []
        self.alphabet_sizes: List[int] = []
        self.max_label = 0
        self.fitted = False

    def fit(self, graphs: Sequence[Graph]) -> WlRefinement:
        """Build the compression tables and return the refinement of the fitted graphs."""
        labels = [np.asarray(g.vertex_labels, dtype=np.int64) for g in graphs]
        per_graph: List[List[np.ndarray]] = [[current] for current in labels]
        initial = {int(x) for current in labels for x in current}
        alphabet_sizes = [len(initial)]
        max_label = max(initial) if initial else 0
        tables: List[Dict[str, int]] = []

        for _ in range(self.h):
            strings = [augmented_strings(g, current) for g, current in zip(graphs, labels)]
            distinct = sorted({s for graph_strings in strings for s in graph_strings})
            table = {s: max_label + 1 + i for i, s in enumerate(distinct)}
            labels = [np.asarray([table[s] for s in graph_strings], dtype=np.int64) for graph_strings in strings]
            for history, current in zip(per_graph, labels):
                history.append(current)
            tables.append(table)
            alphabet_sizes.append(len(distinct))
            max_label += len(distinct)

        self.tables = tables
        self.alphabet_sizes = alphabet_sizes
        self.max_label = max_label
        self.fitted = True
        logger.debug("wl_fitted", graphs=len(graphs), h=self.h, alphabet_sizes=alphabet_sizes)
        return WlRefinement(labels_per_iteration=per_graph, alphabet_sizes=list(alphabet_sizes))

    def transform(self, graphs: Sequence[Graph]) -> WlRefinement:
        """Refine graphs with the fitted tables."""
        if not self.fitted:
            raise ArgumentError("WlRefiner must be fitted before transform")
        labels = [np.asarray(g.vertex_labels, dtype=np.int64) for g in graphs]
        per_graph: List[List[np.ndarray]] = [[current] for current in labels]
        next_fresh = self.max_label + 1
        for table in self.tables:
            strings = [augmented_strings(g, current) for g, current in zip(graphs, labels)]
            unseen = sorted({s for graph_strings in strings for s in graph_strings if s not in table})
            fresh = {s: next_fresh + i for i, s in enumerate(unseen)}
            next_fresh += len(unseen)
            labels = [
                np.asarray([table[s] if s in table else fresh[s] for s in graph_strings], dtype=np.int64)
                for graph_strings in strings
            ]
            for history, current in zip(per_graph, labels):
                history.append(current)
        return WlRefinement(labels_per_iteration=per_graph, alphabet_sizes=list(self.alphabet_sizes))


def wl_refine(dataset: GraphDataset, h: int) -> WlRefinement:
    """Dataset-global WL refinement for iterations 0..h."""
    return WlRefiner(h).fit(dataset.graphs)


def wl_keys(refinement: WlRefinement) -> List[WlKey]:
    """Every (iteration, label) pair occurring in the refinement."""
    keys = set()
    for history in refinement.labels_per_iteration:
        for t, current in enumerate(history):
            keys.update((t, int(x)) for x in current)
    return sorted(keys)


def wl_feature_index(refinement: WlRefinement, h: int) -> FeatureIndex:
    return index_from_keys(FeatureKind.WL_SUBTREE, wl_keys(refinement), {"h": h})


def wl_vertex_counts(history: Sequence[np.ndarray]) -> List[Counter]:
    """One-hot counters over (iteration, label), one per vertex."""
    num_vertices = len(history[0]) if history else 0
    return [Counter((t, int(current[v])) for t, current in enumerate(history)) for v in range(num_vertices)]


def wl_vertex_features(
    refinement: WlRefinement, graph_id: int, index: Optional[FeatureIndex] = None
) -> VertexFeatureMatrix:
    """
    Vertex rows concatenating the one-hot labels of iterations 0..h.

    Args:
        refinement: Refinement covering graph_id
        graph_id: Position of the graph in the refined collection
        index: Shared column index; built from the refinement when omitted

    Returns:
        VertexFeatureMatrix whose column sums give the WL graph feature map
    """
    if not 0 <= graph_id < len(refinement.labels_per_iteration):
        raise ArgumentError(f"Unknown graph id {graph_id}")
    if index is None:
        index = wl_feature_index(refinement, refinement.iterations)
    counters = wl_vertex_counts(refinement.labels_per_iteration[graph_id])
    return VertexFeatureMatrix(graph_id=graph_id, rows=counts_to_matrix(counters, index))
