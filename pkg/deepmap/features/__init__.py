"""
Vertex feature maps over a shared substructure index.
"""

from .extractor import FeatureExtractor, resolve_params
from .graphlets import gk_vertex_counts, gk_vertex_features, graphlet_canonical_class
from .index import build_feature_index, graph_feature_map
from .serialization import (
    INDEX_FILE,
    read_feature_index,
    read_feature_matrices,
    write_feature_index,
    write_feature_matrices,
)
from .shortest_path import sp_vertex_counts, sp_vertex_features
from .wl import WlRefiner, wl_refine, wl_vertex_features

__all__ = [
    "FeatureExtractor",
    "INDEX_FILE",
    "WlRefiner",
    "build_feature_index",
    "gk_vertex_counts",
    "gk_vertex_features",
    "graph_feature_map",
    "graphlet_canonical_class",
    "read_feature_index",
    "read_feature_matrices",
    "resolve_params",
    "sp_vertex_counts",
    "sp_vertex_features",
    "wl_refine",
    "wl_vertex_features",
    "write_feature_index",
    "write_feature_matrices",
]
