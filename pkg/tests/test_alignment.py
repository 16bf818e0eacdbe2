"""
Tests for vertex sequences, receptive fields and tensor assembly.
"""

import numpy as np
import pytest

from deepmap.alignment import DUMMY, assemble_input, read_tensor, receptive_field, vertex_sequence, write_tensor
from deepmap.alignment.assembler import sidecar_path
from deepmap.alignment.sequence import aligned_slots
from deepmap.centrality import compute_centralities, eigenvector_centrality
from deepmap.errors import ArgumentError, DatasetFormatError, IntegrityError, MissingInputError
from deepmap.features import FeatureExtractor
from deepmap.graphs import permute_graph
from deepmap.types import FeatureKind, Graph, Permutation
from deepmap.verification import fixtures


def names(members, alphabet):
    return "".join("_" if v == DUMMY else alphabet[v] for v in members)


def wl_tensor(graphs, r, w=None):
    matrices = FeatureExtractor(FeatureKind.WL_SUBTREE, {"h": 2}).fit_transform(graphs)
    return assemble_input(graphs, matrices, compute_centralities(graphs), r, w)


class TestVertexSequence:
    """Test cases for centrality ordering."""

    def test_worked_examples(self, centrality_pair):
        """Sequences of both worked examples, the second padded to w = 6."""
        g1, g2 = centrality_pair.graphs

        order_1 = vertex_sequence(g1, eigenvector_centrality(g1), 6).order
        order_2 = vertex_sequence(g2, eigenvector_centrality(g2), 6).order

        assert names(order_1, fixtures.NAMES_1) == fixtures.SEQUENCE_1
        assert names(order_2, fixtures.NAMES_2) == fixtures.SEQUENCE_2 + "__"

    def test_ties_break_by_index(self):
        """Symmetric vertices keep index order."""
        g = Graph.from_edges(3, [(0, 1), (1, 2)])

        assert vertex_sequence(g, eigenvector_centrality(g), 3).order == (1, 0, 2)

    def test_too_short(self, centrality_pair):
        """w below the vertex count is an argument error."""
        g = centrality_pair.graphs[0]

        with pytest.raises(ArgumentError):
            vertex_sequence(g, eigenvector_centrality(g), 5)


class TestReceptiveField:
    """Test cases for BFS receptive fields."""

    @pytest.mark.parametrize("graph_index,alphabet,expected", [
        (0, fixtures.NAMES_1, fixtures.FIELDS_1),
        (1, fixtures.NAMES_2, fixtures.FIELDS_2),
    ])
    def test_worked_examples(self, centrality_pair, graph_index, alphabet, expected):
        """Fields at r = 3 match the tabulated ones."""
        g = centrality_pair.graphs[graph_index]
        c = eigenvector_centrality(g)

        for center, field in expected.items():
            members = receptive_field(g, alphabet.index(center), c, fixtures.FIELD_SIZE).members
            assert names(members, alphabet) == field

    def test_r_one_is_center(self, centrality_pair):
        """r = 1 keeps only the center."""
        g = centrality_pair.graphs[0]

        assert receptive_field(g, 2, eigenvector_centrality(g), 1).members == (2,)

    def test_small_component_padded(self):
        """Fields larger than the component are padded with DUMMY."""
        g = Graph.from_edges(4, [(0, 1)])
        field = receptive_field(g, 0, eigenvector_centrality(g), 4)

        assert field.members[2:] == (DUMMY, DUMMY)
        assert set(field.members[:2]) == {0, 1}

    def test_invalid_arguments(self, path_graph):
        """r < 1 and unknown centers are argument errors."""
        c = eigenvector_centrality(path_graph)
        with pytest.raises(ArgumentError):
            receptive_field(path_graph, 0, c, 0)
        with pytest.raises(ArgumentError):
            receptive_field(path_graph, 3, c, 2)

    def test_aligned_slots(self, path_graph):
        """Each sequence slot owns r rows, padding slots stay DUMMY."""
        slots = aligned_slots(path_graph, eigenvector_centrality(path_graph), 4, 2)

        assert slots.tolist() == [1, 0, 1, 0, 1, 2, DUMMY, DUMMY]


class TestAssembleInput:
    """Test cases for the aligned input tensor."""

    def test_shape(self, centrality_pair):
        """n x (w * r) x m with w the largest vertex count."""
        tensor = wl_tensor(centrality_pair.graphs, r=3)

        assert tensor.w == 6
        assert tensor.r == 3
        assert tensor.shape[:2] == (2, 18)
        assert tensor.vertex_counts.tolist() == [6, 4]
        assert tensor.mask_for([1]).tolist() == [[True] * 4 + [False] * 2]

    def test_padding_rows_are_zero(self, centrality_pair):
        """Slots past the vertex count are all-zero rows."""
        dense = wl_tensor(centrality_pair.graphs, r=3).dense()

        assert not dense[1, 4 * 3 :].any()
        assert dense[1, : 4 * 3].any(axis=1).all()

    def test_longer_sequence_appends_zeros(self, centrality_pair):
        """A larger w only appends zero slots."""
        base = wl_tensor(centrality_pair.graphs, r=2).dense()
        longer = wl_tensor(centrality_pair.graphs, r=2, w=9).dense()

        assert np.array_equal(longer[:, : base.shape[1]], base)
        assert not longer[:, base.shape[1] :].any()

    def test_permutation_invariance(self, centrality_pair):
        """Isomorphic inputs give identical tensors."""
        g = centrality_pair.graphs[0]
        moved = permute_graph(g, Permutation.random(g.num_vertices, np.random.default_rng(8)))

        dense = wl_tensor([g, moved], r=3).dense()

        assert np.array_equal(dense[0], dense[1])

    def test_inconsistent_inputs(self, centrality_pair):
        """Matrices must match the graphs."""
        graphs = centrality_pair.graphs
        matrices = FeatureExtractor(FeatureKind.WL_SUBTREE, {"h": 1}).fit_transform(graphs)
        centralities = compute_centralities(graphs)

        with pytest.raises(IntegrityError):
            assemble_input(graphs, matrices[:1], centralities, 3)
        with pytest.raises(IntegrityError):
            assemble_input(graphs, matrices[::-1], centralities, 3)
        with pytest.raises(ArgumentError):
            assemble_input(graphs, matrices, centralities, 3, w=4)


class TestTensorFile:
    """Test cases for the binary tensor format."""

    def test_write_read(self, tmp_path, centrality_pair):
        """The tensor, labels and class count survive a round trip."""
        tensor = wl_tensor(centrality_pair.graphs, r=3)
        path = write_tensor(tmp_path / "tensor.bin", tensor, [0, 1], 2)

        loaded, labels, class_count = read_tensor(path)

        assert path.stat().st_size == 32 + 2 * 18 * tensor.m * 4
        assert np.array_equal(loaded.dense(), tensor.dense())
        assert loaded.vertex_counts.tolist() == [6, 4]
        assert labels == [0, 1]
        assert class_count == 2

    def test_header(self, tmp_path, centrality_pair):
        """Header is n, w, r, m as little-endian int64."""
        tensor = wl_tensor(centrality_pair.graphs, r=3)
        path = write_tensor(tmp_path / "tensor.bin", tensor, [0, 1], 2)

        header = np.frombuffer(path.read_bytes()[:32], dtype="<i8")

        assert header.tolist() == [2, 6, 3, tensor.m]

    def test_missing(self, tmp_path):
        """Missing files are missing inputs."""
        with pytest.raises(MissingInputError):
            read_tensor(tmp_path / "absent.bin")

    def test_truncated(self, tmp_path, centrality_pair):
        """A truncated body is a format error."""
        tensor = wl_tensor(centrality_pair.graphs, r=3)
        path = write_tensor(tmp_path / "tensor.bin", tensor, [0, 1], 2)
        path.write_bytes(path.read_bytes()[:-4])

        with pytest.raises(DatasetFormatError):
            read_tensor(path)

    def test_bad_sidecar(self, tmp_path, centrality_pair):
        """A sidecar missing fields is a format error."""
        tensor = wl_tensor(centrality_pair.graphs, r=3)
        path = write_tensor(tmp_path / "tensor.bin", tensor, [0, 1], 2)
        sidecar_path(path).write_text("{}", encoding="utf-8")

        with pytest.raises(DatasetFormatError):
            read_tensor(path)
