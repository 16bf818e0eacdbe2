"""
Dataset-global feature index and graph feature maps.
"""

from typing import Any, Dict, Optional

import numpy as np

from ..types import FeatureIndex, FeatureKind, GraphDataset, VertexFeatureMatrix
from .extractor import FeatureExtractor


def build_feature_index(
    dataset: GraphDataset, kind: FeatureKind, params: Optional[Dict[str, Any]] = None
) -> FeatureIndex:
    """
    Assign dense columns to every substructure key observed in the dataset.

    Args:
        dataset: Graphs to scan; GK keys come from the seeded samples
        kind: Feature kind
        params: Kind parameters (gk: k, q, seed; wl: h)

    Returns:
        FeatureIndex with columns in sorted key order
    """
    return FeatureExtractor(kind, params).fit(dataset.graphs)


def graph_feature_map(vfm: VertexFeatureMatrix) -> np.ndarray:
    """Exact int64 column sums of the vertex rows."""
    return np.asarray(vfm.rows.sum(axis=0), dtype=np.int64).ravel()
