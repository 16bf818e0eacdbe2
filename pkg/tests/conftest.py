"""
Shared fixtures: the worked example graphs and a small synthetic dataset.
"""

import pytest

from deepmap.graphs import generate_er_dataset
from deepmap.types import Graph, GraphDataset
from deepmap.verification import fixtures


@pytest.fixture
def wl_pair() -> GraphDataset:
    return fixtures.wl_pair()


@pytest.fixture
def centrality_pair() -> GraphDataset:
    return fixtures.centrality_pair()


@pytest.fixture
def path_graph() -> Graph:
    """Path 0 - 1 - 2 with degree labels."""
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def small_dataset() -> GraphDataset:
    """40 graphs of 8 to 14 vertices in 2 classes."""
    return generate_er_dataset(40, 2, (8, 14), 0.3, seed=7, name="small")
