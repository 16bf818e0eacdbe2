"""
Stratified k-fold partitions.
"""

from typing import List, Sequence

import numpy as np

from ..errors import ArgumentError
from ..types import FoldPlan


def stratified_kfold(labels: Sequence[int], k: int, seed: int = 0) -> FoldPlan:
    """
    Deal each class's shuffled samples round-robin over the folds.

    The deal position carries over from one class to the next, so fold
    sizes differ by at most one overall as well as per class.

    Raises:
        ArgumentError: k < 2 or k > number of samples
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = len(labels)
    if k < 2:
        raise ArgumentError(f"Folds must be at least 2, got {k}")
    if k > n:
        raise ArgumentError(f"Cannot split {n} samples into {k} folds")

    rng = np.random.default_rng(seed)
    folds: List[List[int]] = [[] for _ in range(k)]
    offset = 0
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        members = members[rng.permutation(len(members))]
        for j, sample in enumerate(members):
            folds[(offset + j) % k].append(int(sample))
        offset = (offset + len(members)) % k
    return FoldPlan(folds=tuple(tuple(sorted(f)) for f in folds), seed=seed)
