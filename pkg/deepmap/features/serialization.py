"""
Sparse text format for vertex feature matrices and the JSON index manifest.

One file per graph:
    graph_id m
    vertex_id column:count column:count ...
Every vertex has a line, possibly with no entries.
"""

import json
from pathlib import Path
from typing import Any, List, Union

import numpy as np
from scipy import sparse

from ..errors import DatasetFormatError, MissingInputError
from ..types import FeatureIndex, FeatureKey, FeatureKind, VertexFeatureMatrix

PathLike = Union[str, Path]

INDEX_FILE = "index.json"


def format_feature_matrix(vfm: VertexFeatureMatrix) -> str:
    rows = vfm.rows.tocsr()
    lines = [f"{vfm.graph_id} {vfm.dimension}"]
    for v in range(vfm.num_vertices):
        start, end = rows.indptr[v], rows.indptr[v + 1]
        entries = " ".join(f"{col}:{count}" for col, count in zip(rows.indices[start:end], rows.data[start:end]))
        lines.append(f"{v} {entries}".rstrip())
    return "\n".join(lines) + "\n"


def parse_feature_matrix(text: str, source: str = "") -> VertexFeatureMatrix:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DatasetFormatError("Empty feature file", source)
    try:
        graph_id, dimension = (int(x) for x in lines[0].split())
        rows, cols, data = [], [], []
        for expected, line in enumerate(lines[1:]):
            fields = line.split()
            if int(fields[0]) != expected:
                raise DatasetFormatError(f"Vertex lines out of order at vertex {expected}", source)
            for entry in fields[1:]:
                col, count = entry.split(":")
                rows.append(expected)
                cols.append(int(col))
                data.append(int(count))
    except ValueError as e:
        raise DatasetFormatError(f"Malformed feature file: {e}", source) from e
    matrix = sparse.csr_matrix(
        (np.asarray(data, dtype=np.int64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(len(lines) - 1, dimension),
    )
    return VertexFeatureMatrix(graph_id=graph_id, rows=matrix)


def feature_file_name(graph_id: int) -> str:
    return f"graph_{graph_id:06d}.txt"


def write_feature_matrices(directory: PathLike, matrices: List[VertexFeatureMatrix]) -> List[Path]:
    """Write one sparse text file per graph."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for vfm in matrices:
        path = directory / feature_file_name(vfm.graph_id)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(format_feature_matrix(vfm))
        paths.append(path)
    return paths


def read_feature_matrices(directory: PathLike) -> List[VertexFeatureMatrix]:
    """Read every graph file of a directory, ordered by graph id."""
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingInputError(str(directory))
    matrices = [
        parse_feature_matrix(path.read_text(encoding="utf-8"), str(path))
        for path in sorted(directory.glob("graph_*.txt"))
    ]
    return sorted(matrices, key=lambda vfm: vfm.graph_id)


def _encode_key(key: FeatureKey) -> Any:
    return list(key) if isinstance(key, tuple) else key


def _decode_key(kind: FeatureKind, raw: Any) -> FeatureKey:
    return raw if kind == FeatureKind.GRAPHLET else tuple(int(x) for x in raw)


def write_feature_index(path: PathLike, index: FeatureIndex) -> Path:
    """JSON manifest with kind, params, dimension and keys in column order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest = {
        "kind": index.kind.value,
        "params": index.params,
        "dimension": index.dimension,
        "keys": [_encode_key(key) for key in index.keys()],
    }
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def read_feature_index(path: PathLike) -> FeatureIndex:
    path = Path(path)
    if not path.is_file():
        raise MissingInputError(str(path))
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
        kind = FeatureKind(manifest["kind"])
        keys = [_decode_key(kind, raw) for raw in manifest["keys"]]
    except (KeyError, ValueError, TypeError) as e:
        raise DatasetFormatError(f"Malformed feature index: {e}", str(path)) from e
    return FeatureIndex(kind=kind, column_of={key: col for col, key in enumerate(keys)}, params=manifest.get("params", {}))
