"""
Type definitions for DeepMap.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Hashable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import sparse

from .errors import ArgumentError


class FeatureKind(str, Enum):
    """Substructure family used for vertex feature maps."""
    GRAPHLET = "gk"
    SHORTEST_PATH = "sp"
    WL_SUBTREE = "wl"


@dataclass(frozen=True)
class Graph:
    """Undirected vertex-labeled graph with 0-based sorted adjacency lists."""
    num_vertices: int
    adjacency: Tuple[Tuple[int, ...], ...]
    vertex_labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.num_vertices or len(self.vertex_labels) != self.num_vertices:
            raise ArgumentError("Adjacency and labels must have one entry per vertex")
        for v, neighbors in enumerate(self.adjacency):
            previous = -1
            for u in neighbors:
                if u <= previous:
                    raise ArgumentError(f"Adjacency of vertex {v} is not strictly increasing")
                if u == v:
                    raise ArgumentError(f"Self-loop at vertex {v}")
                if not 0 <= u < self.num_vertices:
                    raise ArgumentError(f"Neighbor {u} of vertex {v} out of range")
                previous = u
        for v, neighbors in enumerate(self.adjacency):
            for u in neighbors:
                if v not in self.adjacency[u]:
                    raise ArgumentError(f"Edge {v}-{u} is not symmetric")
        if any(label < 1 for label in self.vertex_labels):
            raise ArgumentError("Vertex labels must be >= 1")

    @classmethod
    def from_edges(
        cls,
        num_vertices: int,
        edges: Sequence[Tuple[int, int]],
        labels: Optional[Sequence[int]] = None,
    ) -> "Graph":
        """Build a graph from an edge list; duplicates collapse, direction is ignored."""
        neighbor_sets: List[set] = [set() for _ in range(num_vertices)]
        for u, v in edges:
            if u == v:
                raise ArgumentError(f"Self-loop at vertex {u}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
        if labels is None:
            labels = degree_labels(adjacency)
        return cls(num_vertices, adjacency, tuple(int(x) for x in labels))

    @property
    def num_edges(self) -> int:
        return sum(len(n) for n in self.adjacency) // 2

    def degrees(self) -> np.ndarray:
        return np.array([len(n) for n in self.adjacency], dtype=np.int64)

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield each undirected edge once as (u, v) with u < v."""
        for u, neighbors in enumerate(self.adjacency):
            for v in neighbors:
                if u < v:
                    yield u, v

    def adjacency_matrix(self) -> np.ndarray:
        """Dense 0/1 adjacency matrix as float64."""
        matrix = np.zeros((self.num_vertices, self.num_vertices), dtype=np.float64)
        for u, neighbors in enumerate(self.adjacency):
            matrix[u, list(neighbors)] = 1.0
        return matrix


def degree_labels(adjacency: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Vertex labels derived from degree + 1, so isolated vertices get label 1."""
    return tuple(len(neighbors) + 1 for neighbors in adjacency)


@dataclass(frozen=True)
class GraphDataset:
    """Labeled collection of graphs."""
    graphs: Tuple[Graph, ...]
    class_labels: Tuple[int, ...]
    class_count: int
    name: str = "dataset"

    def __post_init__(self) -> None:
        if not self.graphs:
            raise ArgumentError("Dataset must contain at least one graph")
        if len(self.graphs) != len(self.class_labels):
            raise ArgumentError("class_labels must have one entry per graph")
        if any(not 0 <= c < self.class_count for c in self.class_labels):
            raise ArgumentError(f"Class labels must lie in [0, {self.class_count})")

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def max_vertices(self) -> int:
        return max(g.num_vertices for g in self.graphs)

    def labels_array(self) -> np.ndarray:
        return np.asarray(self.class_labels, dtype=np.int64)


@dataclass(frozen=True)
class Permutation:
    """Bijection on the vertex indices of one graph: vertex v moves to mapping[v]."""
    mapping: Tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ArgumentError("Permutation mapping must be a bijection on [0, n)")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(tuple(int(x) for x in rng.permutation(n)))

    def __len__(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "Permutation":
        inverse = [0] * len(self.mapping)
        for v, image in enumerate(self.mapping):
            inverse[image] = v
        return Permutation(tuple(inverse))

    def apply_to_values(self, values: np.ndarray) -> np.ndarray:
        """Move per-vertex values along the permutation: out[p(v)] = values[v]."""
        out = np.empty_like(values)
        out[list(self.mapping)] = values
        return out


@dataclass
class CentralityVector:
    """Eigenvector centrality scores of one graph."""
    scores: np.ndarray
    iterations_used: int
    converged: bool


FeatureKey = Hashable


@dataclass
class FeatureIndex:
    """Dataset-global mapping from substructure keys to dense column ids."""
    kind: FeatureKind
    column_of: Dict[FeatureKey, int]
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.column_of)

    def keys(self) -> List[FeatureKey]:
        """Keys in column order."""
        return sorted(self.column_of, key=self.column_of.__getitem__)


@dataclass
class VertexFeatureMatrix:
    """Per-vertex substructure counts of one graph, one sparse row per vertex."""
    graph_id: int
    rows: sparse.csr_matrix

    @property
    def num_vertices(self) -> int:
        return int(self.rows.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.rows.shape[1])


@dataclass
class WlRefinement:
    """Compressed WL labels of every vertex of every graph for iterations 0..h."""
    labels_per_iteration: List[List[np.ndarray]]
    alphabet_sizes: List[int]

    @property
    def iterations(self) -> int:
        return len(self.alphabet_sizes) - 1


@dataclass(frozen=True)
class VertexSequence:
    """Centrality-ordered vertices of one graph, padded with dummies to length w."""
    graph_id: int
    order: Tuple[int, ...]


@dataclass(frozen=True)
class ReceptiveField:
    """A vertex and its r - 1 companions, sorted by descending centrality."""
    center: int
    members: Tuple[int, ...]


@dataclass
class AlignedTensor:
    """Network input for a dataset, stored as n * w * r sparse rows of width m.

    Rows of graph i occupy [i * w * r, (i + 1) * w * r); slot s of that graph
    owns the r consecutive rows starting at s * r.
    """
    data: sparse.csr_matrix
    vertex_counts: np.ndarray
    w: int
    r: int

    def __post_init__(self) -> None:
        if self.data.shape[0] != self.n * self.w * self.r:
            raise ArgumentError("Tensor row count must equal n * w * r")

    @property
    def n(self) -> int:
        return int(len(self.vertex_counts))

    @property
    def m(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.n, self.w * self.r, self.m

    def rows_for(self, indices: Sequence[int]) -> sparse.csr_matrix:
        """Sparse rows of the selected graphs, reshaped to (b * w, r * m)."""
        block = self.w * self.r
        row_ids = (np.asarray(indices, dtype=np.int64)[:, None] * block + np.arange(block)).ravel()
        rows = self.data[row_ids]
        return sparse.csr_matrix(rows.reshape((len(indices) * self.w, self.r * self.m)))

    def mask_for(self, indices: Sequence[int]) -> np.ndarray:
        """Boolean (b, w) mask of non-dummy sequence slots."""
        counts = self.vertex_counts[np.asarray(indices, dtype=np.int64)]
        return np.arange(self.w)[None, :] < counts[:, None]

    def dense(self) -> np.ndarray:
        """Materialize the n x (w * r) x m array."""
        return self.data.toarray().reshape(self.shape)


class ModelConfig(BaseModel):
    """Shape of the convolutional network."""
    input_dim: int
    field_size: int
    sequence_len: int
    class_count: int
    conv_channels: Tuple[int, int, int] = (32, 16, 8)
    dense_units: int = 128
    dropout_rate: float = 0.5

    @field_validator("input_dim", "field_size", "sequence_len", "dense_units")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Dimensions must be at least 1")
        return v

    @field_validator("class_count")
    @classmethod
    def validate_class_count(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Class count must be at least 2")
        return v

    @field_validator("conv_channels")
    @classmethod
    def validate_channels(cls, v: Tuple[int, int, int]) -> Tuple[int, int, int]:
        if any(c < 1 for c in v):
            raise ValueError("Convolution channels must be at least 1")
        return v

    @field_validator("dropout_rate")
    @classmethod
    def validate_dropout(cls, v: float) -> float:
        if not 0 <= v < 1:
            raise ValueError("Dropout rate must be in [0, 1)")
        return v


class TrainConfig(BaseModel):
    """Optimizer and schedule settings."""
    learning_rate: float = 0.01
    decay_factor: float = 0.5
    patience: int = 5
    batch_size: int = 32
    max_epochs: int = 100
    rmsprop_rho: float = 0.9
    rmsprop_eps: float = 1e-8
    seed: int = 0

    @field_validator("patience", "batch_size", "max_epochs")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Patience, batch size and epochs must be at least 1")
        return v

    @field_validator("learning_rate", "rmsprop_eps")
    @classmethod
    def validate_rate(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("Learning rate and epsilon must be positive")
        return v

    @field_validator("decay_factor", "rmsprop_rho")
    @classmethod
    def validate_fraction(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("Decay factor and rho must be in (0, 1)")
        return v


@dataclass
class EpochRecord:
    """Metrics of one training epoch."""
    epoch: int
    loss: float
    accuracy: float
    lr: float
    test_accuracy: Optional[float] = None


@dataclass
class TrainingHistory:
    """Per-epoch training record."""
    records: List[EpochRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def losses(self) -> List[float]:
        return [r.loss for r in self.records]

    @property
    def accuracies(self) -> List[float]:
        return [r.accuracy for r in self.records]

    @property
    def learning_rates(self) -> List[float]:
        return [r.lr for r in self.records]

    def to_frame(self) -> pd.DataFrame:
        """History as a DataFrame with columns epoch, loss, accuracy, lr."""
        return pd.DataFrame(
            [(r.epoch, r.loss, r.accuracy, r.lr) for r in self.records],
            columns=["epoch", "loss", "accuracy", "lr"],
        )


@dataclass
class GramMatrix:
    """Kernel matrix over a set of graphs."""
    values: np.ndarray
    kind: Optional[FeatureKind] = None
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified partition of sample indices into k folds."""
    folds: Tuple[Tuple[int, ...], ...]
    seed: int

    @property
    def k(self) -> int:
        return len(self.folds)

    def split(self, fold: int) -> Tuple[np.ndarray, np.ndarray]:
        """(train indices, test indices) for one fold."""
        test = np.asarray(self.folds[fold], dtype=np.int64)
        train = np.sort(np.concatenate([np.asarray(f, dtype=np.int64) for i, f in enumerate(self.folds) if i != fold]))
        return train, test


class GradCheckReport(BaseModel):
    """Relative error of analytic against numerical gradients per parameter group."""
    errors: Dict[str, float]
    tolerance: float
    step: float

    @property
    def max_error(self) -> float:
        return max(self.errors.values())

    @property
    def failing_groups(self) -> List[str]:
        return [name for name, error in self.errors.items() if error > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.failing_groups


class FoldOutcome(BaseModel):
    """Result of one cross-validation fold."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    fold: int
    accuracy: float
    train_accuracy: float
    test_accuracy_curve: List[float] = []
    train_accuracy_curve: List[float] = []
    min_eigenvalue: Optional[float] = None
    psd: Optional[bool] = None


class CrossValidationReport(BaseModel):
    """Aggregate of a cross-validation run."""
    pipeline: str
    kind: Optional[str] = None
    params: Dict[str, Any] = {}
    fold_accuracies: List[float]
    mean_accuracy: float
    std_accuracy: float
    best_epoch: Optional[int] = None
    mean_test_accuracy_curve: List[float] = []
    mean_train_accuracy_curve: List[float] = []
    min_eigenvalues: List[float] = []
    psd: Optional[bool] = None
    wall_time_seconds: float = 0.0


class CheckResult(BaseModel):
    """Outcome of one verification check."""
    name: str
    passed: bool
    detail: str = ""
