"""
Explicit-feature graph kernels and positive-semidefiniteness checks.
"""

from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
from scipy import sparse

from ..errors import ArgumentError, IntegrityError
from ..features.index import graph_feature_map
from ..types import FeatureKind, GramMatrix, VertexFeatureMatrix

FeatureRows = Union[np.ndarray, sparse.spmatrix, Sequence[np.ndarray]]

SYMMETRY_TOL = 1e-9
PSD_RELATIVE_TOL = 1e-8


def stack_graph_features(matrices: Sequence[VertexFeatureMatrix]) -> sparse.csr_matrix:
    """Graph feature maps (vertex row sums) as an n x m int64 sparse matrix."""
    dimensions = {vfm.dimension for vfm in matrices}
    if len(dimensions) > 1:
        raise IntegrityError(f"Feature matrices disagree on dimension: {sorted(dimensions)}")
    return sparse.csr_matrix(np.vstack([graph_feature_map(vfm) for vfm in matrices]), dtype=np.int64)


def _as_int_rows(graph_features: FeatureRows) -> sparse.csr_matrix:
    if sparse.issparse(graph_features):
        return sparse.csr_matrix(graph_features, dtype=np.int64)
    if isinstance(graph_features, np.ndarray) and graph_features.ndim == 2:
        return sparse.csr_matrix(graph_features.astype(np.int64))
    vectors = [np.asarray(v) for v in graph_features]
    lengths = {v.shape for v in vectors}
    if len(lengths) > 1:
        raise IntegrityError(f"Feature vectors disagree on dimension: {sorted(lengths)}")
    return sparse.csr_matrix(np.vstack(vectors).astype(np.int64))


def gram_matrix(
    graph_features: FeatureRows,
    kind: Optional[FeatureKind] = None,
    params: Optional[Dict[str, Any]] = None,
) -> GramMatrix:
    """
    K[i][j] = <phi(G_i), phi(G_j)>, accumulated in int64 and returned as float64.

    Args:
        graph_features: n count vectors of equal length, dense or sparse
        kind: Feature kind recorded on the result
        params: Feature parameters recorded on the result
    """
    rows = _as_int_rows(graph_features)
    values = (rows @ rows.T).toarray().astype(np.float64)
    return GramMatrix(values=values, kind=kind, params=dict(params or {}))


def _values(K: Union[GramMatrix, np.ndarray]) -> np.ndarray:
    return np.asarray(K.values if isinstance(K, GramMatrix) else K, dtype=np.float64)


def min_eigenvalue(K: Union[GramMatrix, np.ndarray], tol: float = SYMMETRY_TOL) -> float:
    """
    Smallest eigenvalue of a symmetric matrix (LAPACK symmetric solver).

    Raises:
        ArgumentError: the matrix is not square or asymmetric beyond tol
    """
    values = _values(K)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ArgumentError(f"Expected a square matrix, got shape {values.shape}")
    if values.size == 0:
        return 0.0
    asymmetry = float(np.abs(values - values.T).max())
    if asymmetry > tol:
        raise ArgumentError(f"Matrix is not symmetric (max asymmetry {asymmetry:.3e})")
    return float(np.linalg.eigvalsh(values)[0])


def is_psd(K: Union[GramMatrix, np.ndarray], relative_tol: float = PSD_RELATIVE_TOL) -> bool:
    """min eigenvalue >= -relative_tol * trace."""
    values = _values(K)
    return min_eigenvalue(values) >= -relative_tol * float(np.trace(values))


def normalize_features(vectors: Union[np.ndarray, sparse.spmatrix]):
    """
    Scale each row (or a single vector) to unit L2 norm; zero rows stay zero.

    Sparse input gives a sparse float64 result.
    """
    if sparse.issparse(vectors):
        rows = sparse.csr_matrix(vectors, dtype=np.float64)
        norms = np.sqrt(np.asarray(rows.multiply(rows).sum(axis=1)).ravel())
        scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
        return sparse.diags(scale) @ rows
    array = np.asarray(vectors, dtype=np.float64)
    if array.ndim == 1:
        norm = np.linalg.norm(array)
        return array / norm if norm > 0 else array.copy()
    norms = np.linalg.norm(array, axis=1, keepdims=True)
    return np.divide(array, norms, out=np.zeros_like(array), where=norms > 0)
