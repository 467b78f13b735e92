#===============================================================================
#
#  MidFea mid-level feature learning tools
#
#  Copyright (c) 2021  MidFea developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
#===============================================================================

import math

import numpy as np
import pytest

#===============================================================================

from midfea.exceptions import InvalidArgumentError, NumericFailure
from midfea.nslayer import (NSHyper, NSModel, allocate_neurons, analytic_decoder,
                            class_block_objective, cross_class_coherence, encode, grad_D,
                            grad_Hc, grad_Wb, infer_batch, init_classwise, init_random,
                            objective, objective_terms, selectivity_report, similarity_codes,
                            train)
from midfea.nslayer.trainer import LineSearch
from midfea.numerics import SeededRng

from conftest import labelled_blobs

#===============================================================================

def random_instance(seed, p, d, N, C):
    rng = SeededRng(seed)
    X = rng.uniform(0.0, 1.0, (p, N))
    labels = np.arange(N) % C
    D = rng.normal(1.0, (p, d))
    D = D/np.linalg.norm(D, axis=0)
    W = rng.normal(0.5, (d, p))
    b = rng.normal(0.5, d)
    H = rng.uniform(0.0, 1.0, (d, N))
    hyper = NSHyper(alpha=0.7, beta=0.3, gamma=0.2, lam=0.4)
    return X, labels, H, NSModel(D, W, b, hyper)

def finite_difference(f, x, h=1e-5):
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for index in np.ndindex(*x.shape):
        saved = x[index]
        x[index] = saved + h
        upper = f(x)
        x[index] = saved - h
        lower = f(x)
        x[index] = saved
        grad[index] = (upper - lower)/(2.0*h)
    return grad

def relative_error(a, b):
    return np.linalg.norm(a - b)/max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)

def sigmoid(t):
    return 1.0/(1.0 + math.exp(-t))

#===============================================================================

class TestEncoder:
    def test_zero_weights(self):
        model = NSModel(np.eye(3), np.zeros((3, 3)), np.zeros(3))
        np.testing.assert_array_equal(encode(np.ones(3), model), [0.5, 0.5, 0.5])
        np.testing.assert_array_equal(infer_batch(np.ones((3, 4)), model), np.full((3, 4), 0.5))

    def test_saturation(self):
        model = NSModel(np.eye(2), np.zeros((2, 2)), [40.0, 0.0])
        h = encode(np.zeros(2), model)
        assert h[0] > 1.0 - 1e-12

    def test_batch_matches_columns(self, rng):
        model = NSModel(rng.normal(1.0, (5, 4)), rng.normal(1.0, (4, 5)), rng.normal(1.0, 4))
        X = rng.uniform(0.0, 1.0, (5, 6))
        H = infer_batch(X, model)
        for n in range(6):
            np.testing.assert_allclose(H[:, n], encode(X[:, n], model), rtol=1e-14)
            for i in range(4):
                oracle = sigmoid(sum(model.W[i, j]*X[j, n] for j in range(5)) + model.b[i])
                assert H[i, n] == pytest.approx(oracle, rel=1e-12)
        assert np.all((H > 0.0) & (H < 1.0))

    def test_dimension_mismatch(self):
        model = NSModel(np.eye(3), np.zeros((3, 3)), np.zeros(3))
        with pytest.raises(InvalidArgumentError):
            encode(np.ones(4), model)
        with pytest.raises(InvalidArgumentError):
            infer_batch(np.ones((2, 5)), model)

#===============================================================================

class TestObjective:
    def test_matches_term_by_term_sum(self):
        X, labels, H, model = random_instance(1, 3, 2, 5, 2)
        hyper = model.hyper
        p, d, N = 3, 2, 5
        total = 0.0
        for i in range(p):
            for n in range(N):
                total += (X[i, n] - sum(model.D[i, k]*H[k, n] for k in range(d)))**2
        for k in range(d):
            for n in range(N):
                encoded = sigmoid(sum(model.W[k, j]*X[j, n] for j in range(p)) + model.b[k])
                total += hyper.alpha*(H[k, n] - encoded)**2
        for c in range(2):
            members = [n for n in range(N) if labels[n] == c]
            others = [n for n in range(N) if labels[n] != c]
            for k in range(d):
                total += hyper.lam*math.sqrt(sum(H[k, n]**2 for n in members))
                mean = sum(H[k, n] for n in members)/len(members)
                total += hyper.beta*sum((H[k, n] - mean)**2 for n in members)
            for n in members:
                for m in others:
                    total += hyper.gamma*sum(H[k, n]*H[k, m] for k in range(d))**2
        assert objective(X, labels, H, model) == pytest.approx(total, rel=1e-12)

    def test_only_encoding_term_remains(self):
        # Perfect reconstruction, no sparsity, similarity or coherence costs
        D = np.eye(2)
        H = np.zeros((2, 4))
        X = D @ H
        model = NSModel(D, np.zeros((2, 2)), np.zeros(2), NSHyper(alpha=2.0))
        terms = objective_terms(X, np.array([0, 0, 1, 1]), H, model)
        assert terms.reconstruction == 0.0
        assert terms.sparsity == terms.similarity == terms.incoherence == 0.0
        assert objective(X, np.array([0, 0, 1, 1]), H, model) == pytest.approx(2.0*8*0.25)

    def test_neuron_relabelling(self):
        X, labels, H, model = random_instance(2, 5, 4, 9, 3)
        permutation = np.array([2, 0, 3, 1])
        permuted = NSModel(model.D[:, permutation], model.W[permutation], model.b[permutation], model.hyper)
        assert objective(X, labels, H[permutation], permuted) == pytest.approx(
               objective(X, labels, H, model), rel=1e-12)

    def test_shape_checks(self):
        X, labels, H, model = random_instance(3, 4, 3, 6, 2)
        with pytest.raises(InvalidArgumentError):
            objective(X, labels[:-1], H, model)
        with pytest.raises(InvalidArgumentError):
            objective(X, labels, H[:2], model)

    def test_labels_with_gap(self):
        X, labels, H, model = random_instance(3, 4, 3, 6, 2)
        with pytest.raises(InvalidArgumentError):
            objective(X, np.array([0, 0, 0, 2, 2, 2]), H, model)
        with pytest.raises(InvalidArgumentError):
            grad_Hc(0, X, np.array([0, 0, 0, 2, 2, 2]), H, model)

    def test_sparsity_weight_is_linear(self):
        X, labels, H, model = random_instance(8, 5, 4, 9, 3)
        hyper = model.hyper
        doubled = NSModel(model.D, model.W, model.b, hyper.with_values(lam=2.0*hyper.lam))
        l21 = sum(np.sum(np.linalg.norm(H[:, labels == c], axis=1)) for c in range(3))
        assert objective_terms(X, labels, H, model).sparsity == pytest.approx(l21, rel=1e-12)
        assert (objective(X, labels, H, doubled) - objective(X, labels, H, model)
                == pytest.approx(hyper.lam*l21, rel=1e-9))

    def test_single_sample_class(self):
        X, labels, H, model = random_instance(9, 4, 3, 1, 1)
        terms = objective_terms(X, labels, H, model)
        assert terms.similarity == 0.0
        assert terms.incoherence == 0.0
        assert terms.sparsity == pytest.approx(np.sum(np.abs(H)), rel=1e-12)

#===============================================================================

class TestGradients:
    def test_decoder(self):
        for seed in range(20):
            X, labels, H, model = random_instance(seed, 5, 4, 6, 2)
            numeric = finite_difference(lambda D: np.sum((X - D @ H)**2), model.D)
            assert relative_error(grad_D(X, H, model.D), numeric) < 1e-6

    def test_activations(self):
        for seed in range(20):
            rng = SeededRng(100 + seed)
            p, d, N, C = int(rng.integers(2, 9)), int(rng.integers(2, 7)), int(rng.integers(6, 13)), 3
            X, labels, H, model = random_instance(seed, p, d, N, C)
            for c in range(C):
                idx = np.flatnonzero(labels == c)
                numeric = finite_difference(
                    lambda Hc: class_block_objective(Hc, c, X, labels, H, model), H[:, idx])
                assert relative_error(grad_Hc(c, X, labels, H, model), numeric) < 1e-5

    def test_activations_with_fixed_mean(self):
        X, labels, H, model = random_instance(7, 6, 5, 9, 3)
        idx = np.flatnonzero(labels == 1)
        mean = np.repeat(np.full((5, 1), 0.3), len(idx), axis=1)
        numeric = finite_difference(
            lambda Hc: class_block_objective(Hc, 1, X, labels, H, model, H_mean=mean), H[:, idx])
        assert relative_error(grad_Hc(1, X, labels, H, model, H_mean=mean), numeric) < 1e-5

    def test_encoder(self):
        for seed in range(20):
            X, labels, H, model = random_instance(seed, 5, 4, 7, 2)
            alpha = model.hyper.alpha
            loss = lambda W, b: alpha*np.sum((H - 1.0/(1.0 + np.exp(-(W @ X + b[:, np.newaxis]))))**2)
            gW, gb = grad_Wb(X, H, model.W, model.b, alpha)
            assert relative_error(gW, finite_difference(lambda W: loss(W, model.b), model.W)) < 1e-6
            assert relative_error(gb, finite_difference(lambda b: loss(model.W, b), model.b)) < 1e-6

    def test_encoder_gradient_scales_with_alpha(self):
        X, labels, H, model = random_instance(4, 5, 4, 7, 2)
        gW, gb = grad_Wb(X, H, model.W, model.b, 1.0)
        gW3, gb3 = grad_Wb(X, H, model.W, model.b, 3.0)
        np.testing.assert_allclose(gW3, 3.0*gW, rtol=1e-12)
        np.testing.assert_allclose(gb3, 3.0*gb, rtol=1e-12)

    def test_analytic_decoder_fits_best(self):
        X, labels, H, model = random_instance(5, 6, 4, 12, 3)
        D = analytic_decoder(X, H, 1e-8)
        assert np.sum((X - D @ H)**2) <= np.sum((X - model.D @ H)**2)
        np.testing.assert_allclose(2.0*(D @ H - X) @ H.T, 0.0, atol=1e-6)

    def test_zero_activation_row(self):
        X, labels, H, model = random_instance(10, 5, 4, 8, 2)
        idx = np.flatnonzero(labels == 0)
        H[np.ix_([1, 3], idx)] = 0.0
        assert model.hyper.eps_row > 0.0
        gradient = grad_Hc(0, X, labels, H, model)
        assert np.all(np.isfinite(gradient))
        unpenalised = NSModel(model.D, model.W, model.b, model.hyper.with_values(lam=0.0))
        # a zero row contributes nothing through the sparsity term
        np.testing.assert_allclose(gradient[[1, 3]], grad_Hc(0, X, labels, H, unpenalised)[[1, 3]], atol=1e-12)

    def test_exact_reconstruction(self):
        X, labels, H, model = random_instance(11, 6, 4, 9, 3)
        X = model.D @ H
        np.testing.assert_allclose(grad_D(X, H, model.D), 0.0, atol=1e-12)
        reconstruction_only = NSModel(model.D, model.W, model.b,
                                      NSHyper(alpha=0.0, beta=0.0, gamma=0.0, lam=0.0))
        for c in range(3):
            np.testing.assert_allclose(grad_Hc(c, X, labels, H, reconstruction_only), 0.0, atol=1e-10)

#===============================================================================

class TestInitialisation:
    def test_allocation(self):
        assert allocate_neurons([10, 10, 10], 9) == [3, 3, 3]
        assert allocate_neurons([10, 10, 10], 10) == [4, 3, 3]
        assert allocate_neurons([10, 2, 10], 12) == [4, 2, 4]
        with pytest.raises(InvalidArgumentError):
            allocate_neurons([5, 5, 5], 2)

    def test_similarity_at_a_centroid(self):
        D = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        h = similarity_codes(np.array([[0.0], [1.0]]), D)
        assert h[1, 0] > 0.99
        assert np.linalg.norm(h[:, 0]) == pytest.approx(1.0)

    def test_equidistant_centroids(self):
        h = similarity_codes(np.zeros((2, 1)), np.eye(2))
        np.testing.assert_allclose(h[:, 0], [1.0/np.sqrt(2.0), 1.0/np.sqrt(2.0)])

    def test_classwise(self, rng):
        X, labels = labelled_blobs(3, 10, 6, rng)
        hyper = NSHyper(d=7)
        D, H = init_classwise(X, labels, hyper, SeededRng(3))
        assert D.shape == (6, 7) and H.shape == (7, 30)
        np.testing.assert_allclose(np.linalg.norm(D, axis=0), 1.0)
        D2, H2 = init_classwise(X, labels, hyper, SeededRng(3))
        np.testing.assert_array_equal(D, D2)
        np.testing.assert_array_equal(H, H2)

    def test_random(self, rng):
        D, H, W, b = init_random(5, 8, NSHyper(d=4), rng)
        assert D.shape == (5, 4) and H.shape == (4, 8) and W.shape == (4, 5) and b.shape == (4,)
        for values in (H, W, b):
            assert values.min() >= 0.0 and values.max() <= 0.1
        np.testing.assert_allclose(np.linalg.norm(D, axis=0), 1.0)

#===============================================================================

class TestHyper:
    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            NSHyper(beta=-1.0)
        with pytest.raises(InvalidArgumentError):
            NSHyper(epochs=0)
        with pytest.raises(InvalidArgumentError):
            NSHyper(d=2).neurons(3)
        assert NSHyper().neurons(4) == 80

    def test_from_strings(self):
        hyper = NSHyper.from_dict({'alpha': '2.5', 'd': '12', 'analytic_d': 'true'})
        assert hyper == NSHyper(alpha=2.5, d=12, analytic_d=True)
        assert NSHyper.from_dict(hyper.as_dict()) == hyper
        with pytest.raises(InvalidArgumentError):
            NSHyper.from_dict({'delta': '1'})

    def test_line_search_failure(self):
        search = LineSearch(NSHyper(ls_max=3))
        with pytest.raises(NumericFailure):
            search.search('D', lambda t: t, lambda candidate: np.inf, 1.0, 1.0)
        assert search.search('D', lambda t: t, lambda candidate: 2.0, 1.0, 1.0) == (None, 1.0)

#===============================================================================

@pytest.fixture(scope='module')
def toy_problem():
    return labelled_blobs(3, 20, 10, SeededRng(21))

@pytest.fixture(scope='module')
def toy_result(toy_problem):
    X, labels = toy_problem
    return train(X, labels, NSHyper(d=9, epochs=60, tol=0.0), rng=SeededRng(1))

class TestTraining:
    def test_descent_is_monotone(self, toy_result):
        steps = toy_result.trace.steps
        epochs = toy_result.trace.epochs
        assert len(epochs) >= 50
        assert all(later <= earlier for earlier, later in zip(steps, steps[1:]))
        assert all(later <= earlier for earlier, later in zip(epochs, epochs[1:]))
        assert epochs[-1] < epochs[0]

    def test_decoder_columns_unit_length(self, toy_result):
        norms = np.linalg.norm(toy_result.model.D, axis=0)
        assert np.max(np.abs(norms - 1.0)) < 1e-9

    def test_neurons_are_selective(self, toy_problem, toy_result):
        X, labels = toy_problem
        report = selectivity_report(infer_batch(X, toy_result.model), labels)
        assert report.within_class > report.cross_class

    def test_reproducible(self, toy_problem, toy_result):
        X, labels = toy_problem
        again = train(X, labels, NSHyper(d=9, epochs=60, tol=0.0), rng=SeededRng(1))
        np.testing.assert_array_equal(again.model.W, toy_result.model.W)
        assert again.trace.epochs == toy_result.trace.epochs

    def test_incoherence_weight(self, toy_problem):
        X, labels = toy_problem
        free = train(X, labels, NSHyper(d=9, gamma=0.0, epochs=30, tol=0.0), rng=SeededRng(1))
        strong = train(X, labels, NSHyper(d=9, gamma=1.0, epochs=30, tol=0.0), rng=SeededRng(1))
        assert cross_class_coherence(strong.activations, labels) < cross_class_coherence(free.activations, labels)

    def test_similarity_weight(self, toy_problem):
        X, labels = toy_problem
        def spread(H):
            return sum(np.sum((H[:, labels == c] - H[:, labels == c].mean(axis=1, keepdims=True))**2)
                            for c in range(3))
        free = train(X, labels, NSHyper(d=9, beta=0.0, epochs=30, tol=0.0), rng=SeededRng(1))
        strong = train(X, labels, NSHyper(d=9, beta=1.0, epochs=30, tol=0.0), rng=SeededRng(1))
        assert spread(strong.activations) < spread(free.activations)

    def test_random_initialisation(self, toy_problem):
        X, labels = toy_problem
        result = train(X, labels, NSHyper(d=6, epochs=10), init_mode='random', rng=SeededRng(2))
        assert result.model.d == 6
        assert result.trace.epochs[-1] <= result.trace.epochs[0]

    def test_analytic_decoder_option(self, toy_problem):
        X, labels = toy_problem
        result = train(X, labels, NSHyper(d=9, epochs=10, analytic_d=True), rng=SeededRng(2))
        steps = result.trace.steps
        assert all(later <= earlier for earlier, later in zip(steps, steps[1:]))

    def test_invalid_arguments(self, toy_problem):
        X, labels = toy_problem
        with pytest.raises(InvalidArgumentError):
            train(X, labels, init_mode='zeros', rng=SeededRng(1))
        with pytest.raises(InvalidArgumentError):
            train(X, labels)
        with pytest.raises(InvalidArgumentError):
            train(X[:, :5], labels, rng=SeededRng(1))

#===============================================================================
