"""
Helpers turning per-vertex substructure counters into sparse rows.
"""

from collections import Counter
from typing import Dict, Iterable, List, Sequence

import numpy as np
from scipy import sparse

from ..types import FeatureIndex, FeatureKey, FeatureKind


def index_from_keys(kind: FeatureKind, keys: Iterable[FeatureKey], params: Dict) -> FeatureIndex:
    """Dense columns for the distinct keys, in sorted key order."""
    ordered = sorted(set(keys))
    return FeatureIndex(kind=kind, column_of={key: col for col, key in enumerate(ordered)}, params=dict(params))


def counts_to_matrix(counters: Sequence[Counter], index: FeatureIndex) -> sparse.csr_matrix:
    """
    One int64 row per counter; keys missing from the index are dropped.

    Args:
        counters: Per-vertex key counts
        index: Shared column index

    Returns:
        len(counters) x index.dimension sparse matrix
    """
    indptr: List[int] = [0]
    indices: List[int] = []
    data: List[int] = []
    for counter in counters:
        row = sorted(
            (index.column_of[key], count) for key, count in counter.items() if key in index.column_of
        )
        indices.extend(col for col, _ in row)
        data.extend(count for _, count in row)
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.int64), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(counters), index.dimension),
    )
