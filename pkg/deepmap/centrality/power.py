"""
Eigenvector centrality by shifted power iteration.
"""

from typing import List, Sequence

import numpy as np
import structlog
from scipy import sparse

from ..errors import ArgumentError
from ..types import CentralityVector, Graph

logger = structlog.get_logger(__name__)

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 1000


def _sparse_adjacency(g: Graph) -> sparse.csr_matrix:
    rows = np.repeat(np.arange(g.num_vertices), g.degrees())
    cols = np.fromiter((u for neighbors in g.adjacency for u in neighbors), dtype=np.int64, count=len(rows))
    data = np.ones(len(rows), dtype=np.float64)
    return sparse.csr_matrix((data, (rows, cols)), shape=(g.num_vertices, g.num_vertices))


def eigenvector_centrality(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> CentralityVector:
    """
    Dominant eigenvector of the adjacency matrix, L2-normalized.

    Each step multiplies by (A + I), which has the same dominant eigenvector
    as A but does not oscillate on bipartite graphs.

    Args:
        g: Graph with at least one vertex
        tol: Convergence when the L1 change is below num_vertices * tol
        max_iter: Iteration cap; the last iterate is returned unconverged

    Returns:
        CentralityVector with nonnegative scores
    """
    n = g.num_vertices
    if n < 1:
        raise ArgumentError("Centrality needs a graph with at least one vertex")
    if tol <= 0:
        raise ArgumentError(f"Tolerance must be positive, got {tol}")
    if max_iter < 1:
        raise ArgumentError(f"max_iter must be at least 1, got {max_iter}")

    x = np.full(n, 1.0 / np.sqrt(n))
    if g.num_edges == 0:
        return CentralityVector(scores=x, iterations_used=0, converged=True)

    adjacency = _sparse_adjacency(g)
    for iteration in range(1, max_iter + 1):
        x_next = adjacency @ x + x
        x_next /= np.linalg.norm(x_next)
        change = float(np.abs(x_next - x).sum())
        x = x_next
        if change < n * tol:
            return CentralityVector(scores=x, iterations_used=iteration, converged=True)

    logger.warning("centrality_not_converged", vertices=n, max_iter=max_iter, tol=tol)
    return CentralityVector(scores=x, iterations_used=max_iter, converged=False)


def compute_centralities(
    graphs: Sequence[Graph], tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> List[CentralityVector]:
    """Centrality of every graph, in input order."""
    return [eigenvector_centrality(g, tol, max_iter) for g in graphs]
