"""
Tests for the network layers, model, optimizer, training loop and checkpoints.
"""

import math

import numpy as np
import pytest

from deepmap.alignment import assemble_input
from deepmap.centrality import compute_centralities
from deepmap.errors import ArgumentError, DatasetFormatError, MissingInputError, TrainingError
from deepmap.features import FeatureExtractor
from deepmap.graphs import permute_graph
from deepmap.graphs.synthetic import erdos_renyi_edges
from deepmap.network import (
    PlateauScheduler,
    accuracy,
    forward,
    init_model,
    init_rmsprop_state,
    load_checkpoint,
    loss_and_gradients,
    predict,
    rmsprop_step,
    save_checkpoint,
    train,
)
from deepmap.network.layers import dropout_forward, softmax_cross_entropy, summation_forward
from deepmap.network.model import tensor_logits
from deepmap.types import FeatureKind, Graph, GraphDataset, ModelConfig, Permutation, TrainConfig


def build_tensor(dataset, r=3, w=None):
    matrices = FeatureExtractor(FeatureKind.WL_SUBTREE, {"h": 2}).fit_transform(dataset.graphs)
    return assemble_input(dataset, matrices, compute_centralities(dataset.graphs), r, w)


def model_for(tensor, class_count=2, dropout_rate=0.0, seed=0, dense_units=32):
    config = ModelConfig(
        input_dim=tensor.m,
        field_size=tensor.r,
        sequence_len=tensor.w,
        class_count=class_count,
        conv_channels=(16, 8, 8),
        dense_units=dense_units,
        dropout_rate=dropout_rate,
    )
    return init_model(config, seed)


def with_conv_biases(model, seed=0):
    """Positive convolution biases, so an inactive slot that is not masked changes the sum."""
    rng = np.random.default_rng(seed)
    for name in ("conv1_b", "conv2_b", "conv3_b"):
        model.params[name][:] = rng.uniform(0.1, 0.5, size=model.params[name].shape)
    return model


def distinct_centrality_graph(n=10, p=0.35):
    """First seeded G(n, p) sample whose centralities are pairwise distinct."""
    for seed in range(100):
        g = Graph.from_edges(n, erdos_renyi_edges(n, p, np.random.default_rng(seed)))
        scores = np.sort(compute_centralities([g])[0].scores)
        if np.diff(scores).min() > 1e-4:
            return g
    pytest.fail("No sample with distinct centralities")


class TestLayers:
    """Test cases for layer primitives."""

    def test_uniform_logits_loss(self):
        """Equal logits over 4 classes cost ln 4."""
        loss, dlogits = softmax_cross_entropy(np.zeros((3, 4)), np.array([0, 1, 3]))

        assert loss == pytest.approx(math.log(4))
        assert np.allclose(dlogits.sum(axis=1), 0.0)

    def test_dropout_identity_in_eval(self):
        """Dropout is the identity outside training."""
        x = np.ones((2, 5))
        out, keep = dropout_forward(x, 0.5, np.random.default_rng(0), train_mode=False)

        assert out is x
        assert keep is None

    def test_dropout_scales_kept_units(self):
        """Kept units are scaled by 1 / (1 - rate)."""
        out, keep = dropout_forward(np.ones((50, 50)), 0.5, np.random.default_rng(0), train_mode=True)

        assert set(np.unique(out)) <= {0.0, 2.0}
        assert 0.3 < (out > 0).mean() < 0.7

    def test_summation_ignores_trailing_zeros(self):
        """Appending zero positions leaves the sum bit-identical."""
        h = np.random.default_rng(1).random((2, 4, 3))
        padded = np.concatenate([h, np.zeros((2, 3, 3))], axis=1)

        assert np.array_equal(summation_forward(h), summation_forward(padded))


class TestModel:
    """Test cases for the forward pass."""

    def test_shapes(self, small_dataset):
        """Logits are (b, C); activations are (b, w, channels)."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor, class_count=2)
        batch = np.arange(5)

        logits, cache = forward(model, tensor.rows_for(batch), mask=tensor.mask_for(batch))

        assert logits.shape == (5, 2)
        assert cache["conv1"].shape == (5, tensor.w, 16)
        assert cache["conv2"].shape == (5, tensor.w, 8)
        assert cache["pooled"].shape == (5, 8)

    def test_initial_loss_with_zero_output_layer(self, small_dataset):
        """A zero output layer predicts uniformly: loss is ln C."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor, class_count=4)
        model.params["dense2_w"][:] = 0.0
        batch = np.arange(6)

        loss, _ = loss_and_gradients(model, tensor.rows_for(batch), np.array([0, 1, 2, 3, 0, 1]),
                                     mask=tensor.mask_for(batch))

        assert loss == pytest.approx(math.log(4))

    def test_padding_invariance(self, small_dataset):
        """Extra padding slots leave the logits bit-identical."""
        base = build_tensor(small_dataset)
        padded = build_tensor(small_dataset, w=base.w + 5)
        model = with_conv_biases(model_for(base))

        assert np.array_equal(tensor_logits(model, base), tensor_logits(model, padded))

    def test_dense_batch_matches_sparse(self):
        """Dense and sparse batches agree when a real vertex has an all-zero feature row."""
        graphs = (Graph.from_edges(4, [(0, 1), (1, 2)]), Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]))
        matrices = FeatureExtractor(FeatureKind.SHORTEST_PATH).fit_transform(graphs)
        tensor = assemble_input(graphs, matrices, compute_centralities(graphs), 2)
        model = with_conv_biases(model_for(tensor))
        batch = np.arange(2)
        mask = tensor.mask_for(batch)

        sparse_logits, _ = forward(model, tensor.rows_for(batch), mask=mask)
        dense_logits, _ = forward(model, tensor.dense()[batch], mask=mask)

        assert matrices[0].rows[3].nnz == 0
        assert mask[0].sum() == 4
        assert np.allclose(sparse_logits, dense_logits)
        assert np.allclose(predict(model, tensor.dense(), mask=mask)[1], predict(model, tensor)[1])

    def test_dense_batch_requires_mask(self, small_dataset):
        """Slot activity is never guessed from the feature values."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor)

        with pytest.raises(ArgumentError, match="slot mask"):
            forward(model, tensor.dense()[np.arange(2)])
        with pytest.raises(ArgumentError, match="slot mask"):
            forward(model, tensor.rows_for(np.arange(2)))

    @pytest.mark.parametrize("kind, params", [(FeatureKind.SHORTEST_PATH, {}), (FeatureKind.WL_SUBTREE, {"h": 2})])
    def test_isomorphic_graphs_pool_identically(self, kind, params):
        """A graph and a relabeled copy give the same post-summation features."""
        g = distinct_centrality_graph()
        moved = permute_graph(g, Permutation.random(g.num_vertices, np.random.default_rng(5)))
        graphs = (g, moved)
        matrices = FeatureExtractor(kind, params).fit_transform(graphs)
        tensor = assemble_input(graphs, matrices, compute_centralities(graphs), 3)
        model = with_conv_biases(model_for(tensor))
        batch = np.arange(2)

        logits, cache = forward(model, tensor.rows_for(batch), mask=tensor.mask_for(batch))

        assert cache["pooled"].shape == (2, 8)
        assert np.allclose(cache["pooled"][0], cache["pooled"][1])
        assert np.allclose(logits[0], logits[1])

    def test_probability_rows_sum_to_one(self, small_dataset):
        """Predicted class probabilities form a distribution per graph."""
        tensor = build_tensor(small_dataset)
        model = with_conv_biases(model_for(tensor, class_count=3))

        classes, probabilities = predict(model, tensor)

        assert probabilities.shape == (tensor.n, 3)
        assert np.all(np.abs(probabilities.sum(axis=1) - 1.0) <= 1e-6)
        assert np.array_equal(classes, probabilities.argmax(axis=1))

    def test_mismatched_tensor(self, small_dataset):
        """A tensor with another r is rejected."""
        tensor = build_tensor(small_dataset, r=2)
        model = model_for(build_tensor(small_dataset, r=3))

        with pytest.raises(ArgumentError):
            predict(model, tensor)

    def test_target_range(self, small_dataset):
        """Targets must be class indices."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor)
        batch = np.arange(2)

        with pytest.raises(ArgumentError):
            loss_and_gradients(model, tensor.rows_for(batch), np.array([0, 2]), mask=tensor.mask_for(batch))


class TestOptimizer:
    """Test cases for RMSprop and plateau decay."""

    def test_rmsprop_scalar_step(self, small_dataset):
        """From a zero accumulator a unit gradient moves the parameter by lr / sqrt(1 - rho)."""
        model = model_for(build_tensor(small_dataset))
        model.params["dense2_b"][:] = 0.0
        state = init_rmsprop_state(model, rho=0.9, eps=1e-8)

        rmsprop_step(model, {"dense2_b": np.array([1.0, 0.0])}, state, lr=0.01)

        assert model.params["dense2_b"][0] == pytest.approx(-0.031623, abs=1e-6)
        assert model.params["dense2_b"][1] == 0.0
        assert state.accumulators["dense2_b"][0] == pytest.approx(0.1)
        assert state.steps == 1

    def test_non_finite_gradient(self, small_dataset):
        """A NaN gradient raises before any parameter changes."""
        model = model_for(build_tensor(small_dataset))
        before = {name: p.copy() for name, p in model.params.items()}
        state = init_rmsprop_state(model)
        grads = {name: np.zeros_like(p) for name, p in model.params.items()}
        grads["dense2_w"][0, 0] = np.nan

        with pytest.raises(TrainingError, match="Non-finite gradient"):
            rmsprop_step(model, grads, state, lr=0.01)

        for name, p in model.params.items():
            assert np.array_equal(p, before[name])

    def test_non_finite_update_leaves_state_unchanged(self, small_dataset):
        """An overflowing accumulator rolls back the whole step, including earlier parameters."""
        model = model_for(build_tensor(small_dataset))
        before = {name: p.copy() for name, p in model.params.items()}
        state = init_rmsprop_state(model)
        grads = {
            "dense1_b": np.full_like(model.params["dense1_b"], 0.5),
            "dense2_w": np.zeros_like(model.params["dense2_w"]),
        }
        grads["dense2_w"][0, 0] = 1e200

        with np.errstate(over="ignore"), pytest.raises(TrainingError, match="became non-finite"):
            rmsprop_step(model, grads, state, lr=0.01)

        for name, p in model.params.items():
            assert np.array_equal(p, before[name])
        assert all(not a.any() for a in state.accumulators.values())
        assert state.steps == 0

    def test_second_step_is_smaller(self, small_dataset):
        """A repeated gradient moves the parameter less on the second step."""
        model = model_for(build_tensor(small_dataset))
        state = init_rmsprop_state(model, rho=0.9, eps=1e-8)
        grads = {"dense2_b": np.array([0.7, -0.2])}
        start = model.params["dense2_b"].copy()

        rmsprop_step(model, grads, state, lr=0.01)
        middle = model.params["dense2_b"].copy()
        rmsprop_step(model, grads, state, lr=0.01)

        first, second = np.abs(middle - start), np.abs(model.params["dense2_b"] - middle)
        assert np.all(second < first * 1.01)
        assert np.all(second < first)

    def test_plateau_halving(self):
        """A loss held flat at the best so far halves the rate after epochs 5, 10 and 15."""
        scheduler = PlateauScheduler(lr=0.01, factor=0.5, patience=5, best=1.0)

        lrs = [scheduler.step(1.0) for _ in range(15)]

        assert lrs[:4] == [0.01] * 4
        assert lrs[4] == 0.005
        assert lrs[5:9] == [0.005] * 4
        assert lrs[9] == 0.0025
        assert lrs[14] == 0.00125
        assert scheduler.reductions == 3

    def test_fresh_scheduler_counts_from_first_loss(self):
        """Without a starting best the first epoch only sets it."""
        scheduler = PlateauScheduler(lr=0.01, factor=0.5, patience=5)

        lrs = [scheduler.step(1.0) for _ in range(6)]

        assert lrs[:5] == [0.01] * 5
        assert lrs[5] == 0.005

    def test_improvement_resets_wait(self):
        """A new best loss resets the patience counter."""
        scheduler = PlateauScheduler(lr=1.0, factor=0.5, patience=2)

        for loss in [5.0, 5.0, 4.0, 4.0]:
            scheduler.step(loss)

        assert scheduler.lr == 1.0
        assert scheduler.wait == 1


class TestTrain:
    """Test cases for the training loop."""

    def test_overfits_small_dataset(self, small_dataset):
        """Without dropout the network fits its training set."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor, dropout_rate=0.0, dense_units=64)
        config = TrainConfig(learning_rate=0.01, batch_size=8, max_epochs=60, seed=1)

        history = train(model, tensor, small_dataset.class_labels, config)

        assert len(history) == 60
        assert history.losses[-1] < history.losses[0]
        assert history.accuracies[-1] >= 0.9
        assert accuracy(model, tensor, small_dataset.labels_array()) == history.accuracies[-1]

    def test_fits_eight_graphs(self, small_dataset):
        """Eight training graphs are fitted exactly."""
        subset = GraphDataset(graphs=small_dataset.graphs[:8], class_labels=small_dataset.class_labels[:8],
                              class_count=small_dataset.class_count)
        tensor = build_tensor(subset)
        model = model_for(tensor, dropout_rate=0.0, dense_units=64)

        history = train(model, tensor, subset.class_labels,
                        TrainConfig(learning_rate=0.01, batch_size=8, max_epochs=150, seed=1))

        assert max(history.accuracies) == 1.0

    def test_small_step_does_not_raise_loss(self, small_dataset):
        """One full-batch epoch at lr 1e-4 does not increase the training loss."""
        tensor = build_tensor(small_dataset)
        model = with_conv_biases(model_for(tensor))
        labels = small_dataset.labels_array()
        everything = np.arange(tensor.n)

        def full_loss():
            loss, _ = loss_and_gradients(model, tensor.rows_for(everything), labels, mask=tensor.mask_for(everything))
            return loss

        before = full_loss()
        history = train(model, tensor, labels, TrainConfig(learning_rate=1e-4, batch_size=tensor.n, max_epochs=1))

        assert history.losses[0] == pytest.approx(before)
        assert full_loss() <= before

    def test_deterministic(self, small_dataset):
        """Same seeds, same history."""
        tensor = build_tensor(small_dataset)
        config = TrainConfig(max_epochs=3, batch_size=8, seed=2)

        first = train(model_for(tensor, dropout_rate=0.5, seed=3), tensor, small_dataset.class_labels, config)
        second = train(model_for(tensor, dropout_rate=0.5, seed=3), tensor, small_dataset.class_labels, config)

        assert first.losses == second.losses
        assert first.accuracies == second.accuracies

    def test_history_frame_and_eval_fn(self, small_dataset):
        """eval_fn fills the test accuracy; the frame has the history columns."""
        tensor = build_tensor(small_dataset)
        train_ids, test_ids = np.arange(30), np.arange(30, 40)
        labels = small_dataset.labels_array()
        model = model_for(tensor)

        history = train(model, tensor, labels, TrainConfig(max_epochs=2, batch_size=10), indices=train_ids,
                        eval_fn=lambda m: accuracy(m, tensor, labels, test_ids))

        assert all(r.test_accuracy is not None for r in history.records)
        assert list(history.to_frame().columns)[:4] == ["epoch", "loss", "accuracy", "lr"]

    def test_label_count_mismatch(self, small_dataset):
        """One label per graph."""
        tensor = build_tensor(small_dataset)

        with pytest.raises(ArgumentError):
            train(model_for(tensor), tensor, [0, 1], TrainConfig(max_epochs=1))


class TestCheckpoint:
    """Test cases for checkpoint files."""

    def test_save_load_predictions(self, tmp_path, small_dataset):
        """A reloaded model predicts the same probabilities."""
        tensor = build_tensor(small_dataset)
        model = model_for(tensor, dropout_rate=0.3)
        path = save_checkpoint(tmp_path / "model.ckpt", model)

        loaded = load_checkpoint(path)

        assert loaded.config == model.config
        assert np.array_equal(predict(loaded, tensor)[1], predict(model, tensor)[1])

    def test_bad_magic(self, tmp_path, small_dataset):
        """Files without the magic are rejected."""
        path = save_checkpoint(tmp_path / "model.ckpt", model_for(build_tensor(small_dataset)))
        path.write_bytes(b"XXXX" + path.read_bytes()[4:])

        with pytest.raises(DatasetFormatError, match="Not a DeepMap checkpoint"):
            load_checkpoint(path)

    def test_truncated(self, tmp_path, small_dataset):
        """Missing parameter bytes are a format error."""
        path = save_checkpoint(tmp_path / "model.ckpt", model_for(build_tensor(small_dataset)))
        path.write_bytes(path.read_bytes()[:-8])

        with pytest.raises(DatasetFormatError):
            load_checkpoint(path)

    def test_missing(self, tmp_path):
        """A missing checkpoint is a missing input."""
        with pytest.raises(MissingInputError):
            load_checkpoint(tmp_path / "absent.ckpt")
