"""
Feature extractor: fits a dataset-global column index and featurizes graphs.
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import structlog

from ..errors import ArgumentError
from ..types import FeatureIndex, FeatureKind, Graph, VertexFeatureMatrix
from .counting import counts_to_matrix, index_from_keys
from .graphlets import gk_vertex_counts
from .shortest_path import sp_vertex_counts
from .wl import WlRefiner, wl_feature_index, wl_vertex_counts

logger = structlog.get_logger(__name__)

DEFAULT_PARAMS: Dict[FeatureKind, Dict[str, Any]] = {
    FeatureKind.GRAPHLET: {"k": 5, "q": 20, "seed": 0},
    FeatureKind.SHORTEST_PATH: {},
    FeatureKind.WL_SUBTREE: {"h": 2},
}


def resolve_params(kind: FeatureKind, params: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Kind defaults overlaid with the given params; unknown names are rejected."""
    resolved = dict(DEFAULT_PARAMS[kind])
    for name, value in (params or {}).items():
        if name not in resolved:
            raise ArgumentError(f"Unknown parameter '{name}' for feature kind {kind.value}")
        resolved[name] = int(value)
    return resolved


class FeatureExtractor:
    """
    Vertex feature maps of one kind over a shared column index.

    fit() scans the given graphs for substructure keys (and, for WL, learns
    the compression tables). transform() maps any graphs onto that index;
    keys unseen during fit are dropped.
    """

    def __init__(self, kind: FeatureKind, params: Optional[Dict[str, Any]] = None, threads: int = 1):
        self.kind = FeatureKind(kind)
        self.params = resolve_params(self.kind, params)
        self.threads = max(1, threads)
        self.index: Optional[FeatureIndex] = None
        self.refiner: Optional[WlRefiner] = None

    def _counts(self, g: Graph, graph_id: int) -> List[Counter]:
        if self.kind == FeatureKind.SHORTEST_PATH:
            return sp_vertex_counts(g)
        return gk_vertex_counts(g, self.params["k"], self.params["q"], self.params["seed"], graph_id)

    def _map(self, fn, *iterables) -> list:
        if self.threads == 1:
            return list(map(fn, *iterables))
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, *iterables))

    def fit(self, graphs: Sequence[Graph], graph_ids: Optional[Sequence[int]] = None) -> FeatureIndex:
        """Build the column index from the given graphs."""
        ids = list(range(len(graphs))) if graph_ids is None else list(graph_ids)
        if self.kind == FeatureKind.WL_SUBTREE:
            self.refiner = WlRefiner(self.params["h"])
            self.index = wl_feature_index(self.refiner.fit(graphs), self.params["h"])
        else:
            keys = set()
            for counters in self._map(self._counts, graphs, ids):
                for counter in counters:
                    keys.update(counter)
            self.index = index_from_keys(self.kind, keys, self.params)
        logger.info("feature_index_built", kind=self.kind.value, graphs=len(graphs), dimension=self.index.dimension)
        return self.index

    def transform(self, graphs: Sequence[Graph], graph_ids: Optional[Sequence[int]] = None) -> List[VertexFeatureMatrix]:
        """Vertex feature matrices of the given graphs over the fitted index."""
        if self.index is None:
            raise ArgumentError("FeatureExtractor must be fitted before transform")
        index = self.index
        ids = list(range(len(graphs))) if graph_ids is None else list(graph_ids)
        if self.kind == FeatureKind.WL_SUBTREE:
            refinement = self.refiner.transform(graphs)
            counters = [wl_vertex_counts(history) for history in refinement.labels_per_iteration]
        else:
            counters = self._map(self._counts, graphs, ids)
        return [
            VertexFeatureMatrix(graph_id=graph_id, rows=counts_to_matrix(graph_counters, index))
            for graph_id, graph_counters in zip(ids, counters)
        ]

    def fit_transform(self, graphs: Sequence[Graph], graph_ids: Optional[Sequence[int]] = None) -> List[VertexFeatureMatrix]:
        self.fit(graphs, graph_ids)
        return self.transform(graphs, graph_ids)
