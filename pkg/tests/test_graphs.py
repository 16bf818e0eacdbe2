"""
Tests for graph types, TU dataset I/O, BFS helpers and the synthetic generator.
"""

import numpy as np
import pytest

from deepmap.errors import ArgumentError, DatasetFormatError, IntegrityError
from deepmap.graphs import (
    UNREACHABLE,
    bfs_distances,
    bfs_rings,
    connected_components,
    generate_er_dataset,
    parse_tu_dataset,
    permute_graph,
    write_tu_dataset,
)
from deepmap.types import Graph, Permutation


def write_files(directory, name, files):
    for suffix, lines in files.items():
        (directory / f"{name}_{suffix}.txt").write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")


class TestGraph:
    """Test cases for the Graph value type."""

    def test_from_edges_dedups_and_symmetrizes(self):
        """Duplicate and reversed edges collapse into one."""
        g = Graph.from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 1)])

        assert g.adjacency == ((1,), (0, 2), (1,))
        assert g.num_edges == 2

    def test_degree_labels(self, path_graph):
        """Unlabeled graphs get degree + 1 labels."""
        assert path_graph.vertex_labels == (2, 3, 2)
        isolated = Graph.from_edges(2, [])
        assert isolated.vertex_labels == (1, 1)

    def test_rejects_self_loop(self):
        """Self-loops are not graphs of this kind."""
        with pytest.raises(ArgumentError):
            Graph.from_edges(2, [(1, 1)])

    def test_rejects_asymmetric_adjacency(self):
        """Adjacency must be symmetric."""
        with pytest.raises(ArgumentError, match="not symmetric"):
            Graph(2, ((1,), ()), (1, 1))

    def test_adjacency_matrix(self, triangle):
        """Dense adjacency matrix has zero diagonal."""
        matrix = triangle.adjacency_matrix()

        assert np.array_equal(matrix, np.ones((3, 3)) - np.eye(3))


class TestAlgorithms:
    """Test cases for BFS helpers and permutations."""

    def test_bfs_distances(self, path_graph):
        """Distances along a path."""
        assert bfs_distances(path_graph, 0).tolist() == [0, 1, 2]

    def test_unreachable(self):
        """Vertices in another component are marked unreachable."""
        g = Graph.from_edges(4, [(0, 1), (2, 3)])

        assert bfs_distances(g, 0).tolist() == [0, 1, UNREACHABLE, UNREACHABLE]
        assert connected_components(g).tolist() == [0, 0, 1, 1]

    def test_bfs_symmetric(self):
        """d(u, v) = d(v, u) on random graphs, unreachable pairs included."""
        dataset = generate_er_dataset(6, 2, (6, 12), 0.2, seed=3)

        for g in dataset.graphs:
            distances = np.stack([bfs_distances(g, v) for v in range(g.num_vertices)])
            assert np.array_equal(distances, distances.T)

    def test_bfs_rings(self, centrality_pair):
        """Rings around vertex a of the first worked example."""
        rings = bfs_rings(centrality_pair.graphs[0], 0)

        assert rings == [[0], [1], [4, 5], [2, 3]]

    def test_source_out_of_range(self, path_graph):
        """Source must be a vertex."""
        with pytest.raises(ArgumentError):
            bfs_distances(path_graph, 3)

    def test_permute_graph(self, wl_pair):
        """Permutation moves edges and labels together and inverts exactly."""
        g = wl_pair.graphs[0]
        p = Permutation.random(g.num_vertices, np.random.default_rng(3))
        moved = permute_graph(g, p)

        for u, v in g.edges():
            assert p.mapping[v] in moved.adjacency[p.mapping[u]]
        for v in range(g.num_vertices):
            assert moved.vertex_labels[p.mapping[v]] == g.vertex_labels[v]
        assert permute_graph(moved, p.inverse()) == g


class TestTuDataset:
    """Test cases for TU format parsing and writing."""

    def test_round_trip(self, tmp_path, wl_pair):
        """write then parse reproduces the dataset."""
        write_tu_dataset(wl_pair, tmp_path)
        parsed = parse_tu_dataset(tmp_path, wl_pair.name)

        assert parsed.graphs == wl_pair.graphs
        assert parsed.class_labels == wl_pair.class_labels
        assert parsed.class_count == 2

    def test_parse_small_dataset(self, tmp_path):
        """One-directional edges, CRLF lines and class values remapped to 0..C-1."""
        (tmp_path / "toy_A.txt").write_bytes(b"1, 2\r\n2, 3\r\n4, 5\r\n4, 5\r\n")
        write_files(tmp_path, "toy", {
            "graph_indicator": [1, 1, 1, 2, 2],
            "graph_labels": [-1, 1],
        })

        dataset = parse_tu_dataset(tmp_path, "toy")

        assert len(dataset) == 2
        assert dataset.graphs[0].adjacency == ((1,), (0, 2), (1,))
        assert dataset.graphs[1].adjacency == ((1,), (0,))
        assert dataset.class_labels == (0, 1)
        assert dataset.graphs[0].vertex_labels == (2, 3, 2)

    def test_self_loops_dropped(self, tmp_path):
        """Self-loops are skipped, the rest of the graph is kept."""
        write_files(tmp_path, "loop", {
            "A": ["1, 1", "1, 2"],
            "graph_indicator": [1, 1],
            "graph_labels": [0],
        })

        dataset = parse_tu_dataset(tmp_path, "loop")

        assert dataset.graphs[0].adjacency == ((1,), (0,))

    def test_node_labels_shifted(self, tmp_path):
        """Zero-based vertex labels are shifted to start at 1."""
        write_files(tmp_path, "zero", {
            "A": ["1, 2"],
            "graph_indicator": [1, 1],
            "graph_labels": [0],
            "node_labels": [0, 2],
        })

        dataset = parse_tu_dataset(tmp_path, "zero")

        assert dataset.graphs[0].vertex_labels == (1, 3)

    def test_edge_across_graphs(self, tmp_path):
        """An edge joining two graphs is an integrity error."""
        write_files(tmp_path, "bad", {
            "A": ["1, 2", "2, 3"],
            "graph_indicator": [1, 1, 2],
            "graph_labels": [0, 1],
        })

        with pytest.raises(IntegrityError, match="joins graphs"):
            parse_tu_dataset(tmp_path, "bad")

    def test_node_label_count_mismatch(self, tmp_path):
        """node_labels must have one line per vertex."""
        write_files(tmp_path, "short", {
            "A": ["1, 2"],
            "graph_indicator": [1, 1],
            "graph_labels": [0],
            "node_labels": [1],
        })

        with pytest.raises(IntegrityError):
            parse_tu_dataset(tmp_path, "short")

    def test_missing_file(self, tmp_path):
        """A missing required file is a format error."""
        with pytest.raises(DatasetFormatError, match="Missing dataset file"):
            parse_tu_dataset(tmp_path, "absent")

    def test_non_integer(self, tmp_path):
        """Non-integer lines are format errors."""
        write_files(tmp_path, "text", {
            "A": ["1, 2"],
            "graph_indicator": [1, "x"],
            "graph_labels": [0],
        })

        with pytest.raises(DatasetFormatError):
            parse_tu_dataset(tmp_path, "text")


class TestSyntheticDataset:
    """Test cases for the ER dataset generator."""

    def test_shape(self):
        """Sizes, classes and labels follow the arguments."""
        dataset = generate_er_dataset(30, 3, (10, 16), 0.25, seed=1)

        assert len(dataset) == 30
        assert dataset.class_count == 3
        assert all(10 <= g.num_vertices <= 16 for g in dataset.graphs)
        counts = np.bincount(dataset.labels_array(), minlength=3)
        assert counts.max() - counts.min() <= 1
        for g in dataset.graphs:
            assert g.vertex_labels == tuple(int(d) + 1 for d in g.degrees())

    def test_deterministic(self):
        """Same seed, same dataset; another seed differs."""
        a = generate_er_dataset(20, 2, (8, 12), 0.3, seed=5)
        b = generate_er_dataset(20, 2, (8, 12), 0.3, seed=5)
        c = generate_er_dataset(20, 2, (8, 12), 0.3, seed=6)

        assert a == b
        assert a != c

    @pytest.mark.parametrize("kwargs", [
        {"classes": 1},
        {"edge_prob": 0.0},
        {"edge_prob": 1.0},
        {"size_range": (10, 5)},
        {"size_range": (2, 5)},
        {"num_graphs": 1},
    ])
    def test_invalid_arguments(self, kwargs):
        """Invalid generator arguments are argument errors."""
        params = {"num_graphs": 10, "classes": 2, "size_range": (5, 8), "edge_prob": 0.3, "seed": 0}
        params.update(kwargs)

        with pytest.raises(ArgumentError):
            generate_er_dataset(**params)
