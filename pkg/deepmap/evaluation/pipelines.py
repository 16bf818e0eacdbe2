"""
Cross-validation pipeline descriptors.

Every pipeline is rebuilt from the training graphs of each fold: feature
indexes and WL alphabets only ever see training graphs, and test-fold
substructures outside them map to no column.
"""

from typing import TYPE_CHECKING, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field, PrivateAttr

from ..alignment.assembler import assemble_input
from ..centrality.power import DEFAULT_MAX_ITER, DEFAULT_TOL, compute_centralities
from ..errors import ArgumentError, TrainingError
from ..features.extractor import FeatureExtractor
from ..network.model import accuracy, init_model
from ..network.trainer import train
from ..types import CentralityVector, FeatureKind, FoldOutcome, GraphDataset, ModelConfig, TrainConfig
from .kernels import gram_matrix, is_psd, min_eigenvalue, normalize_features, stack_graph_features
from .logreg import logreg_predict, logreg_train

if TYPE_CHECKING:
    from ..config import Config

logger = structlog.get_logger(__name__)


def _featurize(
    kind: FeatureKind, params: Dict[str, Any], dataset: GraphDataset, train_idx: np.ndarray, threads: int
):
    extractor = FeatureExtractor(kind, params, threads)
    extractor.fit([dataset.graphs[i] for i in train_idx], graph_ids=train_idx)
    all_ids = list(range(len(dataset)))
    return extractor, extractor.transform(dataset.graphs, graph_ids=all_ids)


class MajorityPipeline(BaseModel):
    """Predicts the most frequent training class (smallest id on ties)."""
    name: Literal["majority"] = "majority"

    def describe(self) -> Tuple[Optional[str], Dict[str, Any]]:
        return None, {}

    def prepare(self, dataset: GraphDataset) -> None:
        pass

    def run_fold(self, dataset: GraphDataset, fold: int, train_idx: np.ndarray, test_idx: np.ndarray, threads: int = 1) -> FoldOutcome:
        labels = dataset.labels_array()
        majority = int(np.bincount(labels[train_idx], minlength=dataset.class_count).argmax())
        return FoldOutcome(
            fold=fold,
            accuracy=float((labels[test_idx] == majority).mean()),
            train_accuracy=float((labels[train_idx] == majority).mean()),
        )


class KernelPipeline(BaseModel):
    """Explicit graph feature maps, Gram PSD check and a logistic-regression classifier."""
    name: Literal["kernel"] = "kernel"
    kind: FeatureKind = FeatureKind.WL_SUBTREE
    params: Dict[str, int] = Field(default_factory=dict)
    l2_strength: float = 1e-3
    epochs: int = 500
    lr: float = 0.5
    seed: int = 0

    def describe(self) -> Tuple[Optional[str], Dict[str, Any]]:
        return self.kind.value, dict(self.params)

    def prepare(self, dataset: GraphDataset) -> None:
        pass

    def run_fold(self, dataset: GraphDataset, fold: int, train_idx: np.ndarray, test_idx: np.ndarray, threads: int = 1) -> FoldOutcome:
        labels = dataset.labels_array()
        _, matrices = _featurize(self.kind, self.params, dataset, train_idx, threads)
        features = stack_graph_features(matrices)
        gram = gram_matrix(features[train_idx], self.kind, self.params)
        smallest = min_eigenvalue(gram)

        normalized = normalize_features(features)
        model = logreg_train(normalized[train_idx], labels[train_idx], self.l2_strength, self.epochs, self.lr, self.seed)
        return FoldOutcome(
            fold=fold,
            accuracy=float((logreg_predict(model, normalized[test_idx]) == labels[test_idx]).mean()),
            train_accuracy=float((logreg_predict(model, normalized[train_idx]) == labels[train_idx]).mean()),
            min_eigenvalue=smallest,
            psd=is_psd(gram),
        )


class DeepMapPipeline(BaseModel):
    """Vertex feature maps, centrality alignment and the convolutional network."""
    name: Literal["deepmap"] = "deepmap"
    kind: FeatureKind = FeatureKind.WL_SUBTREE
    params: Dict[str, int] = Field(default_factory=dict)
    field_size: int = 5
    conv_channels: Tuple[int, int, int] = (32, 16, 8)
    dense_units: int = 128
    dropout_rate: float = 0.5
    train_config: TrainConfig = Field(default_factory=TrainConfig)
    centrality_tol: float = DEFAULT_TOL
    centrality_max_iter: int = DEFAULT_MAX_ITER

    _centralities: List[CentralityVector] = PrivateAttr(default_factory=list)
    _w: int = PrivateAttr(default=0)

    def describe(self) -> Tuple[Optional[str], Dict[str, Any]]:
        return self.kind.value, {**self.params, "r": self.field_size}

    def prepare(self, dataset: GraphDataset) -> None:
        """Centralities do not depend on the split, so they are computed once."""
        self._centralities = compute_centralities(dataset.graphs, self.centrality_tol, self.centrality_max_iter)
        self._w = dataset.max_vertices

    def run_fold(self, dataset: GraphDataset, fold: int, train_idx: np.ndarray, test_idx: np.ndarray, threads: int = 1) -> FoldOutcome:
        labels = dataset.labels_array()
        extractor, matrices = _featurize(self.kind, self.params, dataset, train_idx, threads)
        if extractor.index.dimension == 0:
            raise TrainingError(f"Fold {fold}: training graphs produced no substructure features")
        tensor = assemble_input(dataset, matrices, self._centralities, self.field_size, self._w)

        model_config = ModelConfig(
            input_dim=tensor.m,
            field_size=self.field_size,
            sequence_len=tensor.w,
            class_count=dataset.class_count,
            conv_channels=self.conv_channels,
            dense_units=self.dense_units,
            dropout_rate=self.dropout_rate,
        )
        model = init_model(model_config, self.train_config.seed)
        history = train(
            model,
            tensor,
            labels,
            self.train_config,
            indices=train_idx,
            eval_fn=lambda m: accuracy(m, tensor, labels, test_idx),
        )
        test_curve = [float(r.test_accuracy) for r in history.records]
        train_curve = history.accuracies
        return FoldOutcome(
            fold=fold,
            accuracy=test_curve[-1],
            train_accuracy=train_curve[-1],
            test_accuracy_curve=test_curve,
            train_accuracy_curve=train_curve,
        )


Pipeline = Union[DeepMapPipeline, KernelPipeline, MajorityPipeline]

PIPELINE_NAMES = ("deepmap", "kernel", "majority")


def pipeline_from_config(name: str, config: "Config") -> Pipeline:
    """Pipeline descriptor for a command-line pipeline name."""
    if name == "majority":
        return MajorityPipeline()
    if name == "kernel":
        return KernelPipeline(
            kind=config.kind,
            params=config.feature_params(),
            l2_strength=config.l2_strength,
            epochs=config.logreg_epochs,
            lr=config.logreg_lr,
            seed=config.seed,
        )
    if name == "deepmap":
        return DeepMapPipeline(
            kind=config.kind,
            params=config.feature_params(),
            field_size=config.field_size,
            conv_channels=tuple(int(c) for c in config.conv_channels.split(",")),
            dense_units=config.dense_units,
            dropout_rate=config.dropout_rate,
            train_config=config.train_config(),
            centrality_tol=config.centrality_tol,
            centrality_max_iter=config.centrality_max_iter,
        )
    raise ArgumentError(f"Unknown pipeline '{name}'; choose from {list(PIPELINE_NAMES)}")