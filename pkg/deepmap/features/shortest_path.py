"""
Shortest-path vertex feature maps.

Vertex v counts the triplets (label(v), label(t), d(v, t)) over every vertex
t != v reachable from v, so each ordered pair is attributed to its source and
the row sums equal the ordered-pair shortest-path graph feature map.
"""

from collections import Counter
from typing import List, Tuple

from ..errors import ArgumentError
from ..graphs.algorithms import UNREACHABLE, bfs_distances
from ..types import FeatureIndex, FeatureKind, Graph, VertexFeatureMatrix
from .counting import counts_to_matrix

SpKey = Tuple[int, int, int]


def sp_vertex_counts(g: Graph) -> List[Counter]:
    """Triplet counters per source vertex, distances by BFS."""
    counters = []
    labels = g.vertex_labels
    for v in range(g.num_vertices):
        distances = bfs_distances(g, v)
        counter: Counter = Counter()
        for t, d in enumerate(distances):
            if t == v or d == UNREACHABLE:
                continue
            counter[(labels[v], labels[t], int(d))] += 1
        counters.append(counter)
    return counters


def sp_vertex_features(g: Graph, index: FeatureIndex, graph_id: int = 0) -> VertexFeatureMatrix:
    """Shortest-path triplet counts of every vertex, columns from index."""
    if index.kind != FeatureKind.SHORTEST_PATH:
        raise ArgumentError(f"Expected a shortest-path index, got {index.kind.value}")
    return VertexFeatureMatrix(graph_id=graph_id, rows=counts_to_matrix(sp_vertex_counts(g), index))
