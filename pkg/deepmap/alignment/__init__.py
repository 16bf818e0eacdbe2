"""
Vertex alignment: centrality sequences, receptive fields and tensor assembly.
"""

from .assembler import assemble_input, read_tensor, write_tensor
from .sequence import DUMMY, aligned_slots, rank_by_centrality, receptive_field, vertex_sequence

__all__ = [
    "DUMMY",
    "aligned_slots",
    "assemble_input",
    "rank_by_centrality",
    "read_tensor",
    "receptive_field",
    "vertex_sequence",
    "write_tensor",
]
