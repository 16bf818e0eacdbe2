"""
Tests for feature matrix files and the feature index manifest.
"""

import json

import pytest

from deepmap.errors import DatasetFormatError, MissingInputError
from deepmap.features import (
    FeatureExtractor,
    read_feature_index,
    read_feature_matrices,
    write_feature_index,
    write_feature_matrices,
)
from deepmap.features.serialization import feature_file_name, format_feature_matrix, parse_feature_matrix
from deepmap.types import FeatureKind


class TestFeatureMatrixFiles:
    """Test cases for the sparse text format."""

    def test_format(self, wl_pair):
        """Header 'graph_id m', then 'vertex col:count ...' lines."""
        matrices = FeatureExtractor(FeatureKind.WL_SUBTREE, {"h": 1}).fit_transform(wl_pair.graphs)
        lines = format_feature_matrix(matrices[0]).splitlines()

        assert lines[0] == "0 12"
        assert len(lines) == 7
        assert lines[1] == "0 1:1 7:1"

    def test_directory_round_trip(self, tmp_path, small_dataset):
        """Matrices written to a directory read back in graph order."""
        matrices = FeatureExtractor(FeatureKind.SHORTEST_PATH).fit_transform(small_dataset.graphs)
        paths = write_feature_matrices(tmp_path, matrices)

        loaded = read_feature_matrices(tmp_path)

        assert paths[3].name == feature_file_name(3) == "graph_000003.txt"
        assert [vfm.graph_id for vfm in loaded] == list(range(len(matrices)))
        for original, parsed in zip(matrices, loaded):
            assert (original.rows != parsed.rows).nnz == 0

    def test_vertex_without_features(self):
        """A vertex line may carry no entries."""
        vfm = parse_feature_matrix("4 3\n0 2:1\n1\n")

        assert vfm.graph_id == 4
        assert vfm.rows.shape == (2, 3)
        assert vfm.rows[1].nnz == 0

    @pytest.mark.parametrize("text", ["", "0 3\n1 0:1\n", "0 3\n0 a:1\n"])
    def test_malformed(self, text):
        """Empty files, out-of-order vertices and bad entries are format errors."""
        with pytest.raises(DatasetFormatError):
            parse_feature_matrix(text)

    def test_missing_directory(self, tmp_path):
        """Reading a missing directory is a missing input."""
        with pytest.raises(MissingInputError):
            read_feature_matrices(tmp_path / "absent")


class TestFeatureIndexFile:
    """Test cases for the JSON index manifest."""

    @pytest.mark.parametrize("kind,params", [
        (FeatureKind.WL_SUBTREE, {"h": 2}),
        (FeatureKind.SHORTEST_PATH, {}),
        (FeatureKind.GRAPHLET, {"k": 3, "q": 4, "seed": 0}),
    ])
    def test_round_trip(self, tmp_path, small_dataset, kind, params):
        """Keys keep their columns for every kind."""
        index = FeatureExtractor(kind, params).fit(small_dataset.graphs)
        path = write_feature_index(tmp_path / "index.json", index)

        loaded = read_feature_index(path)

        assert loaded.kind == kind
        assert loaded.column_of == index.column_of
        assert json.loads(path.read_text())["dimension"] == index.dimension

    def test_malformed(self, tmp_path):
        """A manifest without keys is a format error."""
        path = tmp_path / "index.json"
        path.write_text('{"kind": "wl"}', encoding="utf-8")

        with pytest.raises(DatasetFormatError):
            read_feature_index(path)
