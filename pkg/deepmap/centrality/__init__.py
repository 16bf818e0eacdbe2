"""
Eigenvector centrality.
"""

from .power import DEFAULT_MAX_ITER, DEFAULT_TOL, compute_centralities, eigenvector_centrality

__all__ = ["DEFAULT_MAX_ITER", "DEFAULT_TOL", "compute_centralities", "eigenvector_centrality"]
