"""Vertex and frequency sampling operators and their matrix views."""
import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsamp import (
    FrequencySampler,
    NotDivisible,
    RandomSensor,
    VariationOperatorKind,
    VertexSampler,
    decompose_graph,
    fold_spectrum,
    frequency_sample,
    frequency_sampler_view,
    gen_graph,
    gft,
    vertex_sample,
    vertex_sampler_view,
)
from graphsamp.filters import exp_decay_kernel, identity_kernel
from graphsamp.sampling import folding_matrix
from conftest import path_graph

COMB = VariationOperatorKind.COMBINATORIAL


class TestVertexSampling:
    def test_full_set_no_filter_is_identity(self, p3):
        dec = decompose_graph(p3, COMB)
        x = np.array([4.0, 5.0, 6.0])
        out = vertex_sample(p3, dec, VertexSampler((0, 1, 2)), x)
        assert np.array_equal(out, x)

    def test_sample_order_follows_set_order(self, p3):
        dec = decompose_graph(p3, COMB)
        out = vertex_sample(p3, dec, VertexSampler((2, 0)), np.array([5.0, 6.0, 7.0]))
        assert np.array_equal(out, np.array([7.0, 5.0]))

    def test_set_input_stored_sorted(self):
        sampler = VertexSampler({3, 1, 2})
        assert sampler.nodes == (1, 2, 3)

    def test_prefilter_matches_dense_row(self, p3):
        # Oracle: row 1 of the densely assembled filter from an independent
        # eigensolver.
        lap = np.array([[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]])
        eigenvalues, vectors = scipy.linalg.eigh(lap, driver="ev")
        dense_filter = vectors @ np.diag(np.exp(-eigenvalues / 2.0)) @ vectors.T
        x = np.array([0.3, -1.2, 2.0])
        expected = dense_filter[1] @ x

        dec = decompose_graph(p3, COMB)
        out = vertex_sample(p3, dec, VertexSampler((1,), prefilter=exp_decay_kernel(2.0)), x)
        assert abs(out[0] - expected) < 1e-12


class TestFoldSpectrum:
    def test_full_ratio_is_identity(self):
        xhat = np.array([1.0, -2.0, 0.5])
        assert np.array_equal(fold_spectrum(xhat, 3), xhat)

    def test_frozen_example(self):
        assert np.array_equal(fold_spectrum(np.array([1.0, 2.0, 3.0, 4.0]), 2), np.array([4.0, 6.0]))

    def test_low_band_input_passes_through(self):
        xhat = np.zeros(8)
        xhat[:4] = (1.0, 2.0, 3.0, 4.0)
        assert np.array_equal(fold_spectrum(xhat, 4), xhat[:4])

    def test_rejects_non_divisor(self):
        with pytest.raises(NotDivisible):
            fold_spectrum(np.ones(8), 3)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(12)
        y = rng.standard_normal(12)
        a, b = rng.standard_normal(2)
        combined = fold_spectrum(a * x + b * y, 4)
        assert np.allclose(combined, a * fold_spectrum(x, 4) + b * fold_spectrum(y, 4), atol=1e-10)


class TestFrequencySampling:
    def test_bandlimited_input_yields_its_coefficients(self, sensor64):
        # With a flat kernel and a signal confined to the first M modes, the
        # samples ARE the expansion coefficients.
        dec = decompose_graph(sensor64, COMB)
        m = 16
        rng = np.random.default_rng(8)
        d = rng.standard_normal(m)
        x = dec.eigenvectors[:, :m] @ d
        c = frequency_sample(dec, FrequencySampler(identity_kernel(), m), x)
        assert np.max(np.abs(c - d)) < 1e-10

    def test_full_band_aliases_via_folding(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        rng = np.random.default_rng(9)
        x = rng.standard_normal(64)
        c = frequency_sample(dec, FrequencySampler(identity_kernel(), 32), x)
        assert np.allclose(c, fold_spectrum(gft(dec, x), 32), atol=1e-12)

    def test_classical_dft_folding_oracle(self):
        # Independent of all graph code: decimating by two in time then taking
        # the half-length DFT equals half the folded full-length DFT.
        rng = np.random.default_rng(10)
        for _ in range(8):
            x = rng.standard_normal(8)
            spectrum = np.fft.fft(x)
            folded = spectrum[:4] + spectrum[4:]
            decimated = np.fft.fft(x[::2])
            assert np.max(np.abs(0.5 * folded - decimated)) < 1e-12

    def test_rejects_non_divisor_ratio(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        with pytest.raises(NotDivisible):
            frequency_sample(dec, FrequencySampler(identity_kernel(), 15), np.ones(64))


class TestMatrixViews:
    def test_vertex_view_matches_direct_sampling(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        sampler = VertexSampler((5, 2, 60), prefilter=exp_decay_kernel(2.0))
        view = vertex_sampler_view(sensor64, dec, sampler)
        rng = np.random.default_rng(11)
        x = rng.standard_normal(64)
        assert np.allclose(view.apply(x), vertex_sample(sensor64, dec, sampler, x), atol=1e-12)

    def test_dense_view_agrees_with_apply(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        rng = np.random.default_rng(12)
        views = [
            vertex_sampler_view(sensor64, dec, VertexSampler((1, 7, 33))),
            vertex_sampler_view(sensor64, dec, VertexSampler((4, 9), prefilter=exp_decay_kernel(2.0))),
            frequency_sampler_view(dec, FrequencySampler(exp_decay_kernel(2.0), 16)),
        ]
        for view in views:
            dense = view.dense()
            for _ in range(5):
                x = rng.standard_normal(64)
                assert np.max(np.abs(dense @ x - view.apply(x))) < 1e-10

    def test_frequency_dense_equals_defining_product(self, sensor64):
        # S^T = D_samp g(Lambda) U^T assembled from its factors.
        dec = decompose_graph(sensor64, COMB)
        kernel = exp_decay_kernel(2.0)
        view = frequency_sampler_view(dec, FrequencySampler(kernel, 16))
        product = folding_matrix(64, 16) @ np.diag(kernel.table(dec.eigenvalues)) @ dec.eigenvectors.T
        assert np.max(np.abs(view.dense() - product)) < 1e-12

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=20, deadline=None)
    def test_adjoint_identity(self, seed):
        rng = np.random.default_rng(seed)
        graph = gen_graph(RandomSensor(24, 4, seed=17))
        dec = decompose_graph(graph, COMB)
        views = [
            vertex_sampler_view(graph, dec, VertexSampler((0, 5, 11), prefilter=exp_decay_kernel(2.0))),
            frequency_sampler_view(dec, FrequencySampler(exp_decay_kernel(2.0), 8)),
        ]
        for view in views:
            x = rng.standard_normal(view.cols)
            y = rng.standard_normal(view.rows)
            assert abs(float(view.apply(x) @ y) - float(x @ view.apply_transpose(y))) < 1e-10

    def test_sampling_is_linear(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        view = frequency_sampler_view(dec, FrequencySampler(exp_decay_kernel(2.0), 16))
        rng = np.random.default_rng(13)
        x, y = rng.standard_normal((2, 64))
        assert np.allclose(view.apply(2.0 * x - 3.0 * y), 2.0 * view.apply(x) - 3.0 * view.apply(y), atol=1e-10)

    def test_vertex_and_frequency_generally_differ(self, sensor64):
        # Same budget, full-band input: the two sampling notions disagree.
        dec = decompose_graph(sensor64, COMB)
        rng = np.random.default_rng(14)
        x = rng.standard_normal(64)
        c_vertex = vertex_sample(sensor64, dec, VertexSampler(tuple(range(16))), x)
        c_freq = frequency_sample(dec, FrequencySampler(identity_kernel(), 16), x)
        assert np.linalg.norm(c_vertex - c_freq) > 1e-6
