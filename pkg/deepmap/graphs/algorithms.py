"""
Elementary graph algorithms shared by feature maps, centrality and alignment.
"""

from collections import deque
from typing import List

import numpy as np

from ..errors import ArgumentError
from ..types import Graph, Permutation

# Hop distance of a vertex that cannot be reached from the source.
UNREACHABLE = -1


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """
    Hop distance from source to every vertex.

    Args:
        g: Graph
        source: Start vertex

    Returns:
        int64 array; unreachable vertices hold UNREACHABLE
    """
    if not 0 <= source < g.num_vertices:
        raise ArgumentError(f"Source {source} out of range for graph with {g.num_vertices} vertices")
    distances = np.full(g.num_vertices, UNREACHABLE, dtype=np.int64)
    distances[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        next_distance = distances[v] + 1
        for u in g.adjacency[v]:
            if distances[u] == UNREACHABLE:
                distances[u] = next_distance
                queue.append(u)
    return distances


def bfs_rings(g: Graph, source: int) -> List[List[int]]:
    """Vertices grouped by hop distance from source, ring 0 being the source itself."""
    distances = bfs_distances(g, source)
    reachable = distances[distances != UNREACHABLE]
    rings: List[List[int]] = [[] for _ in range(int(reachable.max()) + 1)]
    for v, d in enumerate(distances):
        if d != UNREACHABLE:
            rings[d].append(v)
    return rings


def connected_components(g: Graph) -> np.ndarray:
    """Component id per vertex, numbered in order of the smallest member."""
    component = np.full(g.num_vertices, -1, dtype=np.int64)
    current = 0
    for start in range(g.num_vertices):
        if component[start] >= 0:
            continue
        component[bfs_distances(g, start) != UNREACHABLE] = current
        current += 1
    return component


def permute_graph(g: Graph, p: Permutation) -> Graph:
    """
    Relabel vertices: vertex v becomes p(v), edges and labels move with it.

    Args:
        g: Graph
        p: Permutation on g's vertices

    Returns:
        Isomorphic graph with label'(p(v)) = label(v)
    """
    if len(p) != g.num_vertices:
        raise ArgumentError(f"Permutation of size {len(p)} does not match graph with {g.num_vertices} vertices")
    mapping = p.mapping
    labels = [0] * g.num_vertices
    for v, label in enumerate(g.vertex_labels):
        labels[mapping[v]] = label
    edges = [(mapping[u], mapping[v]) for u, v in g.edges()]
    return Graph.from_edges(g.num_vertices, edges, labels)
