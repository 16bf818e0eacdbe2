"""
Worked-example graphs and their golden values.

wl_pair: two labeled 6-vertex graphs whose single WL iteration produces the
compressed labels 5..12. centrality_pair: a 6-vertex graph (vertices a..f)
and a 4-vertex graph (x, y, z, u) with tabulated centralities and
receptive fields at r = 3.
"""

from pathlib import Path
from typing import Dict, List, Tuple, Union

from ..graphs.io import parse_tu_dataset, write_tu_dataset
from ..types import Graph, GraphDataset

PathLike = Union[str, Path]

WL_PAIR = "wl_pair"
CENTRALITY_PAIR = "centrality_pair"

WL_GRAPH_1 = Graph.from_edges(6, [(1, 2), (2, 3), (4, 2), (5, 1), (2, 5), (0, 5)], [2, 3, 4, 1, 1, 3])
WL_GRAPH_2 = Graph.from_edges(6, [(0, 1), (2, 3), (4, 3), (2, 0), (2, 5), (0, 5)], [3, 2, 4, 1, 1, 3])

WL_ITERATION_1_LABELS: Tuple[Tuple[int, ...], Tuple[int, ...]] = ((8, 10, 11, 7, 7, 9), (9, 8, 12, 6, 5, 10))
WL_DIMENSION = 12
WL_CROSS_KERNEL = 13

# a..f = 0..5
CENTRALITY_GRAPH_1 = Graph.from_edges(6, [(5, 4), (4, 3), (2, 4), (1, 5), (4, 1), (0, 1)])
# x, y, z, u = 0..3
CENTRALITY_GRAPH_2 = Graph.from_edges(4, [(3, 2), (3, 0), (3, 1), (0, 1)])

CENTRALITY_1 = (0.21, 0.52, 0.24, 0.24, 0.60, 0.46)
CENTRALITY_2 = (0.52, 0.52, 0.28, 0.61)

NAMES_1 = "abcdef"
NAMES_2 = "xyzu"

SEQUENCE_1 = "ebfcda"
SEQUENCE_2 = "uxyz"

FIELD_SIZE = 3
# Center a is left out: its tabulated field contradicts the top-centrality rule.
FIELDS_1: Dict[str, str] = {"c": "ebc", "d": "ebd", "e": "ebf", "f": "ebf", "b": "ebf"}
FIELDS_2: Dict[str, str] = {"z": "uxz", "u": "uxy", "x": "uxy", "y": "uxy"}


def wl_pair() -> GraphDataset:
    return GraphDataset(graphs=(WL_GRAPH_1, WL_GRAPH_2), class_labels=(0, 1), class_count=2, name=WL_PAIR)


def centrality_pair() -> GraphDataset:
    return GraphDataset(
        graphs=(CENTRALITY_GRAPH_1, CENTRALITY_GRAPH_2), class_labels=(0, 1), class_count=2, name=CENTRALITY_PAIR
    )


def write_fixtures(directory: PathLike) -> List[Path]:
    """Write both fixture datasets in TU format."""
    written = []
    for dataset in (wl_pair(), centrality_pair()):
        written.extend(write_tu_dataset(dataset, directory))
    return written


def load_fixtures(directory: PathLike) -> Tuple[GraphDataset, GraphDataset]:
    """(wl_pair, centrality_pair) read from a TU directory."""
    return parse_tu_dataset(directory, WL_PAIR), parse_tu_dataset(directory, CENTRALITY_PAIR)
