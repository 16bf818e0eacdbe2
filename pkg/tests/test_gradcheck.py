"""
Tests for the finite-difference gradient check.
"""

import numpy as np

from deepmap.network import gradcheck
from deepmap.network.gradcheck import grad_check, relative_error
from deepmap.network.model import PARAM_NAMES
from deepmap.types import ModelConfig

CONFIG = ModelConfig(input_dim=2, field_size=2, sequence_len=3, class_count=3, dropout_rate=0.0)


class TestGradCheck:
    """Test cases for grad_check."""

    def test_all_groups_pass(self):
        """Every parameter group agrees with central differences."""
        report = grad_check(CONFIG, seed=0)

        assert set(report.errors) == set(PARAM_NAMES)
        assert report.passed, report.errors

    def test_zero_input(self):
        """An all-zero batch still checks the bias path."""
        report = grad_check(CONFIG, seed=1, zero_input=True)

        assert report.passed, report.errors

    def test_relative_error(self):
        """Identical vectors have zero error, opposite ones error 1."""
        a = np.array([1.0, -2.0])

        assert relative_error(a, a) == 0.0
        assert relative_error(a, -a) == 1.0
        assert relative_error(np.zeros(2), np.zeros(2)) == 0.0

    def test_corrupted_backward_is_flagged(self, mocker):
        """Doubling the conv2 weight gradient fails that group only."""
        original = gradcheck.loss_and_gradients

        def corrupted(*args, **kwargs):
            loss, grads = original(*args, **kwargs)
            grads["conv2_w"] = grads["conv2_w"] * 2.0
            return loss, grads

        mocker.patch("deepmap.network.gradcheck.loss_and_gradients", side_effect=corrupted)

        report = grad_check(CONFIG, seed=0)

        assert "conv2_w" in report.failing_groups
        assert report.errors["conv2_w"] > report.tolerance
        assert report.errors["conv1_w"] <= report.tolerance
