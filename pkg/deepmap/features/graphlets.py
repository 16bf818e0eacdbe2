"""
Sampled graphlet vertex feature maps.

A graphlet key is the lexicographically smallest upper-triangle bit string of
its adjacency matrix over all k! vertex orderings, so two induced subgraphs
share a key exactly when they are isomorphic. Vertex labels are ignored.
"""

import itertools
from collections import Counter
from functools import lru_cache
from typing import List

import numpy as np

from ..errors import ArgumentError
from ..types import FeatureIndex, FeatureKind, Graph, VertexFeatureMatrix
from .counting import counts_to_matrix

GRAPHLET_SIZES = (3, 4, 5)


def _check_size(k: int) -> None:
    if k not in GRAPHLET_SIZES:
        raise ArgumentError(f"Graphlet size must be one of {list(GRAPHLET_SIZES)}, got {k}")


@lru_cache(maxsize=None)
def _pairs(k: int) -> np.ndarray:
    """Upper-triangle (i, j) pairs in bit order, first pair most significant."""
    return np.array(list(itertools.combinations(range(k), 2)), dtype=np.int64)


@lru_cache(maxsize=None)
def canonical_table(k: int) -> np.ndarray:
    """Canonical mask for every upper-triangle edge mask on k vertices."""
    _check_size(k)
    pairs = _pairs(k)
    num_bits = len(pairs)
    weights = 1 << np.arange(num_bits - 1, -1, -1, dtype=np.int64)
    masks = np.arange(1 << num_bits, dtype=np.int64)
    bits = (masks[:, None] & weights[None, :]) != 0

    position = {(int(i), int(j)): b for b, (i, j) in enumerate(pairs)}
    best = masks.copy()
    for perm in itertools.permutations(range(k)):
        # Bit b of the relabeled graph reads the original pair of (perm[i], perm[j]).
        source = [position[tuple(sorted((perm[i], perm[j])))] for i, j in pairs]
        relabeled = bits[:, source].astype(np.int64) @ weights
        np.minimum(best, relabeled, out=best)
    return best


def _key(mask: int, k: int) -> str:
    return format(int(mask), f"0{len(_pairs(k))}b")


def graphlet_canonical_class(sub_adjacency: np.ndarray) -> str:
    """
    Canonical isomorphism-class key of a small graph.

    Args:
        sub_adjacency: k x k symmetric 0/1 matrix with zero diagonal, k in {3, 4, 5}

    Returns:
        Minimal bit string over all vertex orderings
    """
    matrix = np.asarray(sub_adjacency).astype(bool)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ArgumentError("Graphlet adjacency must be a square matrix")
    k = matrix.shape[0]
    _check_size(k)
    if not np.array_equal(matrix, matrix.T) or matrix.diagonal().any():
        raise ArgumentError("Graphlet adjacency must be symmetric with a zero diagonal")
    pairs = _pairs(k)
    bits = matrix[pairs[:, 0], pairs[:, 1]].astype(np.int64)
    mask = int(bits @ (1 << np.arange(len(pairs) - 1, -1, -1, dtype=np.int64)))
    return _key(canonical_table(k)[mask], k)


def gk_vertex_counts(g: Graph, k: int, q: int, seed: int, graph_id: int = 0) -> List[Counter]:
    """
    Graphlet class counts of q samples per vertex.

    Sample s for vertex v is v plus k - 1 distinct vertices drawn uniformly
    from the rest of the graph. Graphs with fewer than k vertices are padded
    with isolated vertices. The random stream of vertex v depends only on
    (seed, graph_id, v).
    """
    _check_size(k)
    if q < 1:
        raise ArgumentError(f"Graphlet samples must be at least 1, got {q}")
    n = g.num_vertices
    table = canonical_table(k)
    pairs = _pairs(k)
    weights = 1 << np.arange(len(pairs) - 1, -1, -1, dtype=np.int64)

    # Extra row/column of zeros stands for the isolated padding vertex.
    padded = np.zeros((n + 1, n + 1), dtype=np.int64)
    padded[:n, :n] = g.adjacency_matrix()
    pad_vertex = n
    companions = min(k - 1, n - 1)

    counters = []
    for v in range(n):
        rng = np.random.default_rng([seed, graph_id, v])
        others = np.delete(np.arange(n), v)
        chosen = others[np.argsort(rng.random((q, n - 1)), axis=1)[:, :companions]]
        samples = np.full((q, k), pad_vertex, dtype=np.int64)
        samples[:, 0] = v
        samples[:, 1 : 1 + companions] = chosen
        bits = padded[samples[:, pairs[:, 0]], samples[:, pairs[:, 1]]]
        classes = table[bits @ weights]
        counters.append(Counter(_key(c, k) for c in classes))
    return counters


def gk_vertex_features(
    g: Graph, k: int, q: int, seed: int, index: FeatureIndex, graph_id: int = 0
) -> VertexFeatureMatrix:
    """Sampled graphlet counts of every vertex; each row sums to q over indexed classes."""
    if index.kind != FeatureKind.GRAPHLET:
        raise ArgumentError(f"Expected a graphlet index, got {index.kind.value}")
    return VertexFeatureMatrix(graph_id=graph_id, rows=counts_to_matrix(gk_vertex_counts(g, k, q, seed, graph_id), index))
