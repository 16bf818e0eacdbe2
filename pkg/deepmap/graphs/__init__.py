"""
Graph representation, TU dataset I/O, synthetic datasets and BFS helpers.
"""

from .algorithms import UNREACHABLE, bfs_distances, bfs_rings, connected_components, permute_graph
from .io import parse_tu_dataset, write_tu_dataset
from .synthetic import generate_er_dataset

__all__ = [
    "UNREACHABLE",
    "bfs_distances",
    "bfs_rings",
    "connected_components",
    "generate_er_dataset",
    "parse_tu_dataset",
    "permute_graph",
    "write_tu_dataset",
]
