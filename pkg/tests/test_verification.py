"""
Tests for the verification suite.
"""

import pytest

from deepmap.errors import ArgumentError
from deepmap.verification import CHECK_NAMES, run_suite
from deepmap.verification import fixtures


class TestVerificationSuite:
    """Test cases for run_suite."""

    def test_all_checks_pass(self):
        """Every worked example and the gradient check pass."""
        results = run_suite()

        assert [r.name for r in results] == list(CHECK_NAMES)
        assert all(r.passed for r in results), [(r.name, r.detail) for r in results if not r.passed]

    def test_only(self):
        """Selected checks run in canonical order."""
        results = run_suite(["kernel", "wl"])

        assert [r.name for r in results] == ["wl", "kernel"]

    def test_unknown_check(self):
        """Unknown check names are argument errors."""
        with pytest.raises(ArgumentError):
            run_suite(["nope"])

    def test_fixture_dir(self, tmp_path):
        """Fixtures written to disk reproduce the bundled ones."""
        fixtures.write_fixtures(tmp_path)

        wl, centrality = fixtures.load_fixtures(tmp_path)

        assert wl.graphs == fixtures.wl_pair().graphs
        assert centrality.graphs == fixtures.centrality_pair().graphs
        assert all(r.passed for r in run_suite(["centrality", "fields", "wl"], fixture_dir=tmp_path))

    def test_broken_fixture_fails(self, tmp_path):
        """A changed graph fails the WL check."""
        fixtures.write_fixtures(tmp_path)
        labels = tmp_path / f"{fixtures.WL_PAIR}_node_labels.txt"
        lines = labels.read_text().splitlines()
        lines[0] = "4"
        labels.write_text("\n".join(lines) + "\n")

        results = run_suite(["wl"], fixture_dir=tmp_path)

        assert not results[0].passed
