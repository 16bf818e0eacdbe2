"""
Reader and writer for the TU Dortmund graph benchmark text format.

A dataset NAME lives in one directory as:
    NAME_A.txt               "i, j" per line, 1-based global vertex ids
    NAME_graph_indicator.txt 1-based graph id of vertex i on line i
    NAME_graph_labels.txt    class value of graph g on line g
    NAME_node_labels.txt     optional vertex label on line i
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
import structlog

from ..errors import DatasetFormatError, IntegrityError
from ..types import Graph, GraphDataset

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]


def _tu_path(directory: Path, name: str, suffix: str) -> Path:
    return directory / f"{name}_{suffix}.txt"


def _read_column(path: Path) -> np.ndarray:
    """One integer per line; tolerates CRLF and blank lines."""
    try:
        frame = pd.read_csv(path, header=None, dtype=str, skip_blank_lines=True, encoding="utf-8")
    except pd.errors.EmptyDataError:
        return np.zeros(0, dtype=np.int64)
    try:
        return frame.iloc[:, 0].str.strip().astype(np.int64).to_numpy()
    except ValueError as e:
        raise DatasetFormatError(f"Non-integer value in {path.name}: {e}", str(path)) from e


def _read_edges(path: Path) -> np.ndarray:
    """Edge pairs as an (E, 2) array of 1-based ids."""
    try:
        frame = pd.read_csv(path, header=None, sep=",", dtype=str, skip_blank_lines=True, encoding="utf-8")
    except pd.errors.EmptyDataError:
        return np.zeros((0, 2), dtype=np.int64)
    if frame.shape[1] < 2:
        raise DatasetFormatError(f"Expected 'i, j' pairs in {path.name}", str(path))
    try:
        return frame.iloc[:, :2].apply(lambda col: col.str.strip().astype(np.int64)).to_numpy()
    except ValueError as e:
        raise DatasetFormatError(f"Non-integer edge endpoint in {path.name}: {e}", str(path)) from e


def parse_tu_dataset(directory_path: PathLike, dataset_name: str) -> GraphDataset:
    """
    Load a TU benchmark dataset.

    Args:
        directory_path: Directory holding the NAME_*.txt files
        dataset_name: NAME prefix of the files

    Returns:
        Dataset with 0-based vertices, symmetrized edges and dense class ids
    """
    directory = Path(directory_path)
    paths = {suffix: _tu_path(directory, dataset_name, suffix) for suffix in ("A", "graph_indicator", "graph_labels")}
    for path in paths.values():
        if not path.is_file():
            raise DatasetFormatError(f"Missing dataset file: {path.name}", str(path))

    indicator = _read_column(paths["graph_indicator"])
    graph_values = _read_column(paths["graph_labels"])
    edges = _read_edges(paths["A"])
    total_vertices = len(indicator)
    num_graphs = len(graph_values)

    if num_graphs == 0:
        raise DatasetFormatError(f"No graphs in {paths['graph_labels'].name}", str(paths["graph_labels"]))
    if total_vertices and (indicator.min() < 1 or indicator.max() > num_graphs):
        raise IntegrityError(f"Graph indicator values must lie in [1, {num_graphs}]")

    node_labels_path = _tu_path(directory, dataset_name, "node_labels")
    node_labels: Optional[np.ndarray] = None
    if node_labels_path.is_file():
        node_labels = _read_column(node_labels_path)
        if len(node_labels) != total_vertices:
            raise IntegrityError(
                f"{node_labels_path.name} has {len(node_labels)} lines, expected {total_vertices}"
            )
        if len(node_labels) and node_labels.min() < 1:
            shift = 1 - int(node_labels.min())
            logger.info("node_labels_shifted", dataset=dataset_name, shift=shift)
            node_labels = node_labels + shift

    # Local index of each global vertex within its graph, in file order.
    graph_of = indicator - 1
    local_index = np.zeros(total_vertices, dtype=np.int64)
    sizes = np.zeros(num_graphs, dtype=np.int64)
    for v, g in enumerate(graph_of):
        local_index[v] = sizes[g]
        sizes[g] += 1

    edge_lists: List[List[Tuple[int, int]]] = [[] for _ in range(num_graphs)]
    self_loops = 0
    for line, (i, j) in enumerate(edges, start=1):
        if not (1 <= i <= total_vertices and 1 <= j <= total_vertices):
            raise IntegrityError(f"{paths['A'].name} line {line}: vertex id out of range", line)
        gi, gj = graph_of[i - 1], graph_of[j - 1]
        if gi != gj:
            raise IntegrityError(
                f"{paths['A'].name} line {line}: edge joins graphs {gi + 1} and {gj + 1}", line
            )
        if i == j:
            self_loops += 1
            continue
        edge_lists[gi].append((int(local_index[i - 1]), int(local_index[j - 1])))

    if self_loops:
        logger.warning("self_loops_dropped", dataset=dataset_name, count=self_loops)

    label_lists: List[List[int]] = [[] for _ in range(num_graphs)]
    if node_labels is not None:
        for v, g in enumerate(graph_of):
            label_lists[g].append(int(node_labels[v]))

    graphs = []
    for g in range(num_graphs):
        graph = Graph.from_edges(int(sizes[g]), edge_lists[g], label_lists[g] if node_labels is not None else None)
        graphs.append(graph)

    class_values = sorted(set(int(x) for x in graph_values))
    class_of: Dict[int, int] = {value: idx for idx, value in enumerate(class_values)}
    dataset = GraphDataset(
        graphs=tuple(graphs),
        class_labels=tuple(class_of[int(x)] for x in graph_values),
        class_count=len(class_values),
        name=dataset_name,
    )
    logger.info(
        "dataset_loaded",
        dataset=dataset_name,
        graphs=num_graphs,
        vertices=total_vertices,
        classes=dataset.class_count,
        node_labels=node_labels is not None,
    )
    return dataset


def write_tu_dataset(dataset: GraphDataset, directory_path: PathLike, dataset_name: Optional[str] = None) -> List[Path]:
    """
    Write a dataset in TU format; both directions of every edge are listed.

    Args:
        dataset: Dataset to write
        directory_path: Target directory, created if needed
        dataset_name: File prefix, defaults to dataset.name

    Returns:
        Paths of the written files
    """
    name = dataset_name or dataset.name
    directory = Path(directory_path)
    directory.mkdir(parents=True, exist_ok=True)

    edge_lines: List[str] = []
    indicator_lines: List[str] = []
    node_label_lines: List[str] = []
    offset = 0
    for graph_number, graph in enumerate(dataset.graphs, start=1):
        for v, neighbors in enumerate(graph.adjacency):
            for u in neighbors:
                edge_lines.append(f"{offset + v + 1}, {offset + u + 1}")
            indicator_lines.append(str(graph_number))
            node_label_lines.append(str(graph.vertex_labels[v]))
        offset += graph.num_vertices

    contents = {
        "A": edge_lines,
        "graph_indicator": indicator_lines,
        "graph_labels": [str(c) for c in dataset.class_labels],
        "node_labels": node_label_lines,
    }
    written = []
    for suffix, lines in contents.items():
        path = _tu_path(directory, name, suffix)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.writelines(line + "\n" for line in lines)
        written.append(path)
    logger.info("dataset_written", dataset=name, directory=str(directory), graphs=len(dataset))
    return written
