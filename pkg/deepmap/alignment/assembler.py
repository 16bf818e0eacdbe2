"""
Assembly of aligned network inputs and their binary file format.

Binary layout: n, w, r, m as little-endian int64, then the n x (w * r) x m
array as row-major little-endian float32. A JSON sidecar next to it carries
class labels and per-graph vertex counts.
"""

import json
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from scipy import sparse

from ..errors import ArgumentError, DatasetFormatError, IntegrityError, MissingInputError
from ..types import AlignedTensor, CentralityVector, Graph, GraphDataset, VertexFeatureMatrix
from .sequence import DUMMY, aligned_slots

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

HEADER_DTYPE = np.dtype("<i8")
VALUE_DTYPE = np.dtype("<f4")
HEADER_BYTES = 4 * HEADER_DTYPE.itemsize


def _graph_block(slots: np.ndarray, rows: sparse.csr_matrix) -> sparse.csr_matrix:
    """Rows of the slot vertices in slot order; DUMMY slots become zero rows."""
    positions = np.flatnonzero(slots != DUMMY)
    selector = sparse.csr_matrix(
        (np.ones(len(positions), dtype=np.float32), (positions, slots[positions])),
        shape=(len(slots), rows.shape[0]),
    )
    block = selector @ rows.astype(np.float32)
    block.eliminate_zeros()
    return block.tocsr()


def assemble_input(
    dataset: Union[GraphDataset, Sequence[Graph]],
    matrices: Sequence[VertexFeatureMatrix],
    centralities: Sequence[CentralityVector],
    r: int,
    w: Optional[int] = None,
) -> AlignedTensor:
    """
    Stack every graph's receptive-field rows in centrality order.

    Args:
        dataset: Graphs (or a dataset) in tensor order
        matrices: Vertex feature matrices sharing one index
        centralities: Centrality of each graph
        r: Receptive field size
        w: Sequence length; defaults to the largest vertex count

    Returns:
        AlignedTensor with w * r rows per graph
    """
    graphs = list(dataset.graphs if isinstance(dataset, GraphDataset) else dataset)
    if not graphs:
        raise ArgumentError("Cannot assemble an empty dataset")
    if len(matrices) != len(graphs) or len(centralities) != len(graphs):
        raise IntegrityError("Need one feature matrix and one centrality vector per graph")
    dimensions = {vfm.dimension for vfm in matrices}
    if len(dimensions) != 1:
        raise IntegrityError(f"Feature matrices disagree on dimension: {sorted(dimensions)}")
    for i, (g, vfm) in enumerate(zip(graphs, matrices)):
        if vfm.num_vertices != g.num_vertices:
            raise IntegrityError(f"Graph {i} has {g.num_vertices} vertices but {vfm.num_vertices} feature rows")

    max_vertices = max(g.num_vertices for g in graphs)
    w = max_vertices if w is None else w
    if w < max_vertices:
        raise ArgumentError(f"Sequence length {w} is smaller than the largest graph ({max_vertices} vertices)")

    blocks = [
        _graph_block(aligned_slots(g, c, w, r), vfm.rows)
        for g, vfm, c in zip(graphs, matrices, centralities)
    ]
    data = sparse.vstack(blocks, format="csr")
    vertex_counts = np.array([g.num_vertices for g in graphs], dtype=np.int64)
    tensor = AlignedTensor(data=data, vertex_counts=vertex_counts, w=w, r=r)
    logger.info("tensor_assembled", graphs=tensor.n, w=w, r=r, m=tensor.m, nonzeros=int(data.nnz))
    return tensor


def sidecar_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".json")


def write_tensor(path: PathLike, tensor: AlignedTensor, class_labels: Sequence[int], class_count: int) -> Path:
    """Write the binary tensor plus its JSON sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    block = tensor.w * tensor.r
    with open(path, "wb") as handle:
        np.array([tensor.n, tensor.w, tensor.r, tensor.m], dtype=HEADER_DTYPE).tofile(handle)
        for i in range(tensor.n):
            tensor.data[i * block : (i + 1) * block].toarray().astype(VALUE_DTYPE).tofile(handle)
    sidecar = {
        "class_labels": [int(c) for c in class_labels],
        "class_count": int(class_count),
        "vertex_counts": [int(x) for x in tensor.vertex_counts],
    }
    sidecar_path(path).write_text(json.dumps(sidecar) + "\n", encoding="utf-8")
    return path


def read_tensor(path: PathLike) -> Tuple[AlignedTensor, List[int], int]:
    """
    Read a tensor written by write_tensor.

    Returns:
        (tensor, class labels, class count)
    """
    path = Path(path)
    meta_path = sidecar_path(path)
    for required in (path, meta_path):
        if not required.is_file():
            raise MissingInputError(str(required))

    n, w, r, m = (int(x) for x in np.fromfile(path, dtype=HEADER_DTYPE, count=4))
    expected = HEADER_BYTES + n * w * r * m * VALUE_DTYPE.itemsize
    if path.stat().st_size != expected:
        raise DatasetFormatError(f"Tensor file has {path.stat().st_size} bytes, expected {expected}", str(path))
    try:
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        class_labels = [int(c) for c in meta["class_labels"]]
        vertex_counts = np.asarray(meta["vertex_counts"], dtype=np.int64)
        class_count = int(meta["class_count"])
    except (KeyError, ValueError, TypeError) as e:
        raise DatasetFormatError(f"Malformed tensor sidecar: {e}", str(meta_path)) from e
    if len(class_labels) != n or len(vertex_counts) != n:
        raise IntegrityError(f"Sidecar describes {len(class_labels)} graphs, tensor holds {n}")

    block = w * r
    if n * block * m == 0:
        data = sparse.csr_matrix((n * block, m), dtype=VALUE_DTYPE)
        return AlignedTensor(data=data, vertex_counts=vertex_counts, w=w, r=r), class_labels, class_count
    values = np.memmap(path, dtype=VALUE_DTYPE, mode="r", offset=HEADER_BYTES, shape=(n * w * r, m))
    data = sparse.vstack(
        [sparse.csr_matrix(np.asarray(values[i * block : (i + 1) * block])) for i in range(n)],
        format="csr",
    )
    return AlignedTensor(data=data, vertex_counts=vertex_counts, w=w, r=r), class_labels, class_count
