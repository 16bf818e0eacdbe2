"""
Centrality-ordered vertex sequences and BFS receptive fields.

Vertices are ordered by descending centrality with ascending index breaking
ties. Centralities are rounded to 12 decimals before comparison so that
symmetric vertices tie exactly.
"""

from typing import List, Sequence

import numpy as np

from ..errors import ArgumentError
from ..graphs.algorithms import bfs_rings
from ..types import CentralityVector, Graph, ReceptiveField, VertexSequence

# Placeholder for padding slots and missing field members.
DUMMY = -1

CENTRALITY_DECIMALS = 12


def rank_by_centrality(vertices: Sequence[int], c: CentralityVector) -> List[int]:
    """Vertices sorted by (-centrality, index)."""
    rounded = np.round(c.scores, CENTRALITY_DECIMALS)
    return sorted(vertices, key=lambda v: (-rounded[v], v))


def vertex_sequence(g: Graph, c: CentralityVector, w: int, graph_id: int = 0) -> VertexSequence:
    """
    All vertices by descending centrality, padded with DUMMY to length w.

    Args:
        g: Graph
        c: Centrality of g
        w: Sequence length, at least g.num_vertices
        graph_id: Id recorded on the sequence

    Returns:
        VertexSequence of length w
    """
    if w < g.num_vertices:
        raise ArgumentError(f"Sequence length {w} is smaller than the graph's {g.num_vertices} vertices")
    if len(c.scores) != g.num_vertices:
        raise ArgumentError("Centrality vector does not match the graph")
    order = rank_by_centrality(range(g.num_vertices), c)
    return VertexSequence(graph_id=graph_id, order=tuple(order) + (DUMMY,) * (w - g.num_vertices))


def receptive_field(g: Graph, center: int, c: CentralityVector, r: int) -> ReceptiveField:
    """
    The center plus r - 1 companions collected ring by ring around it.

    Whole BFS rings are taken while they fit. The first ring that overflows
    contributes its highest-centrality vertices. Fields of small components
    are padded with DUMMY.
    """
    if r < 1:
        raise ArgumentError(f"Field size must be at least 1, got {r}")
    if not 0 <= center < g.num_vertices:
        raise ArgumentError(f"Center {center} out of range for graph with {g.num_vertices} vertices")

    needed = r - 1
    companions: List[int] = []
    for ring in bfs_rings(g, center)[1:]:
        room = needed - len(companions)
        if room <= 0:
            break
        if len(ring) <= room:
            companions.extend(ring)
        else:
            companions.extend(rank_by_centrality(ring, c)[:room])
            break

    members = rank_by_centrality([center] + companions, c)
    return ReceptiveField(center=center, members=tuple(members) + (DUMMY,) * (r - len(members)))


def aligned_slots(g: Graph, c: CentralityVector, w: int, r: int) -> np.ndarray:
    """Vertex id (or DUMMY) of each of the w * r tensor rows of one graph."""
    slots = np.full(w * r, DUMMY, dtype=np.int64)
    for s, v in enumerate(vertex_sequence(g, c, w).order):
        if v == DUMMY:
            break
        slots[s * r : (s + 1) * r] = receptive_field(g, v, c, r).members
    return slots
