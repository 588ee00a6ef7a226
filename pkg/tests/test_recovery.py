"""Generator construction, pseudoinverse recovery, correction filtering,
and regularized recovery."""
import numpy as np
import pytest

from graphsamp import (
    Bandlimited,
    DimensionMismatch,
    Graph,
    ModelInvalid,
    PeriodicSpectrum,
    PiecewiseConstant,
    RandomSensor,
    SpectralKernel,
    SpectralShapes,
    VariationOperatorKind,
    VertexSampler,
    FrequencySampler,
    build_generator,
    build_laplacian,
    check_ds_condition,
    decompose_graph,
    frequency_sampler_view,
    gen_graph,
    identity_view,
    pgs_correction_kernel,
    recover,
    recover_bandlimited_vertex,
    recover_periodic_frequency,
    regularized_recover,
    synthesize,
    vertex_sampler_view,
)
from graphsamp.filters import exp_decay_kernel, filter_matrix, identity_kernel, linear_decay_kernel
from graphsamp.linalg import pseudo_inverse
from graphsamp.recovery import folded_cross_response, periodic_generator, sampled_generator
from graphsamp.selection import Criterion, greedy_rows, greedy_select
from conftest import path_graph, random_connected_sensor

COMB = VariationOperatorKind.COMBINATORIAL


def table_kernel(eigenvalues, values, name="table"):
    values = np.asarray(values, dtype=float)
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    return SpectralKernel(lambda lam: float(np.interp(lam, eigenvalues, values)), name)


def paw_graph() -> Graph:
    """Four nodes; 2 and 3 are adjacent twins, so every eigenvector with
    eigenvalue != 3 takes equal values on them. Spectrum {0, 1, 3, 4}."""
    return Graph(4, ((0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (2, 3, 1.0)))


class TestBuildGenerator:
    def test_bandlimited_full_bandwidth_is_eigenbasis(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        assert np.array_equal(build_generator(dec, Bandlimited(64)), dec.eigenvectors)

    def test_periodic_flat_kernel_full_period_is_eigenbasis(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        generator = build_generator(dec, PeriodicSpectrum(identity_kernel(), 64))
        assert np.allclose(generator, dec.eigenvectors, atol=1e-12)

    def test_periodic_column_structure_direct_sum_oracle(self, sensor64):
        # Column i must equal sum over folds of a(lambda_j) u_j with j = i mod K.
        dec = decompose_graph(sensor64, COMB)
        kernel = linear_decay_kernel(dec.lambda_max)
        period = 16
        generator = build_generator(dec, PeriodicSpectrum(kernel, period))
        table = kernel.table(dec.eigenvalues)
        for i in (0, 3, 15):
            direct = np.zeros(64)
            for j in range(i, 64, period):
                direct += table[j] * dec.eigenvectors[:, j]
            assert np.max(np.abs(generator[:, i] - direct)) < 1e-12

    def test_periodic_requires_divisor(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        with pytest.raises(ModelInvalid):
            build_generator(dec, PeriodicSpectrum(identity_kernel(), 15))

    def test_spectral_shapes_columns(self, p3):
        dec = decompose_graph(p3, COMB)
        shapes = (exp_decay_kernel(1.0), exp_decay_kernel(3.0))
        generator = build_generator(dec, SpectralShapes(shapes))
        for i, kernel in enumerate(shapes):
            expected = dec.eigenvectors @ kernel.table(dec.eigenvalues)
            assert np.allclose(generator[:, i], expected, atol=1e-12)

    def test_piecewise_constant_indicators(self):
        g = path_graph(5)
        dec = decompose_graph(g, COMB)
        generator = build_generator(dec, PiecewiseConstant(((0, 1), (2, 3, 4))))
        assert np.array_equal(generator[:, 0], [1, 1, 0, 0, 0])
        assert np.array_equal(generator[:, 1], [0, 0, 1, 1, 1])

    def test_piecewise_constant_must_cover(self):
        dec = decompose_graph(path_graph(4), COMB)
        with pytest.raises(ModelInvalid):
            build_generator(dec, PiecewiseConstant(((0, 1), (1, 2, 3))))
        with pytest.raises(ModelInvalid):
            build_generator(dec, PiecewiseConstant(((0, 1),)))


class TestSynthesize:
    def test_basis_vector_selects_column(self, p3):
        dec = decompose_graph(p3, COMB)
        generator = build_generator(dec, Bandlimited(2))
        assert np.array_equal(synthesize(generator, np.array([1.0, 0.0])), generator[:, 0])

    def test_zero_coefficients(self, p3):
        dec = decompose_graph(p3, COMB)
        generator = build_generator(dec, Bandlimited(2))
        assert np.array_equal(synthesize(generator, np.zeros(2)), np.zeros(3))

    def test_bandlimited_sum_form(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        rng = np.random.default_rng(0)
        d = rng.standard_normal(5)
        expected = sum(d[i] * dec.eigenvectors[:, i] for i in range(5))
        got = synthesize(build_generator(dec, Bandlimited(5)), d)
        assert np.allclose(got, expected, atol=1e-12)

    def test_dimension_mismatch(self, p3):
        dec = decompose_graph(p3, COMB)
        with pytest.raises(DimensionMismatch):
            synthesize(build_generator(dec, Bandlimited(2)), np.zeros(3))


class TestDsCondition:
    def test_greedy_uniqueness_set_holds(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        bandwidth = 15
        nodes = greedy_select(dec, bandwidth, bandwidth, Criterion.E_OPT).ordered_nodes
        view = vertex_sampler_view(sensor64, dec, VertexSampler(nodes))
        generator = build_generator(dec, Bandlimited(bandwidth))
        held, sigma = check_ds_condition(generator, view)
        assert held and sigma > 1e-8
        # Oracle: the explicitly formed block has full rank.
        block = dec.eigenvectors[list(nodes), :bandwidth]
        assert np.linalg.matrix_rank(block) == bandwidth

    def test_twin_nodes_break_uniqueness(self):
        # Frozen construction: adjacent twins share every eigenvector entry
        # away from eigenvalue 3, so two twin rows are linearly dependent.
        g = paw_graph()
        dec = decompose_graph(g, COMB)
        assert np.allclose(dec.eigenvalues, [0.0, 1.0, 3.0, 4.0], atol=1e-12)
        view = vertex_sampler_view(g, dec, VertexSampler((2, 3)))
        generator = build_generator(dec, Bandlimited(2))
        held, sigma = check_ds_condition(generator, view)
        assert not held
        assert sigma < 1e-12
        # Oracle: explicit SVD of the sampled block.
        block = dec.eigenvectors[[2, 3], :2]
        assert np.linalg.svd(block, compute_uv=False)[-1] < 1e-12

    def test_orthonormal_self_sampling_has_unit_sigma(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        generator = build_generator(dec, Bandlimited(64))
        held, sigma = check_ds_condition(generator, identity_view(64))
        assert held
        assert abs(sigma - 1.0) < 1e-10

    def test_fewer_samples_than_coefficients_never_holds(self, p3):
        dec = decompose_graph(p3, COMB)
        view = vertex_sampler_view(p3, dec, VertexSampler((0,)))
        held, sigma = check_ds_condition(build_generator(dec, Bandlimited(2)), view)
        assert not held and sigma == 0.0


class TestRecover:
    def test_bandlimited_direct_sampling_perfect(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        bandwidth = 15
        nodes = greedy_select(dec, bandwidth, bandwidth, Criterion.E_OPT).ordered_nodes
        view = vertex_sampler_view(sensor64, dec, VertexSampler(nodes))
        generator = build_generator(dec, Bandlimited(bandwidth))
        x = synthesize(generator, np.random.default_rng(1).standard_normal(bandwidth))
        report = recover(generator, view, view.apply(x))
        assert report.ds_condition_held
        assert np.linalg.norm(report.reconstruction - x) / np.linalg.norm(x) < 1e-8
        assert report.residual_norm < 1e-10

    def test_periodic_frequency_sampling_perfect(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        period = 16
        generator_kernel = linear_decay_kernel(dec.lambda_max)
        sampling_kernel = exp_decay_kernel(2.0)
        generator = build_generator(dec, PeriodicSpectrum(generator_kernel, period))
        view = frequency_sampler_view(dec, FrequencySampler(sampling_kernel, period))
        d = 1.0 + np.random.default_rng(2).standard_normal(period)
        x = synthesize(generator, d)
        report = recover(generator, view, view.apply(x))
        assert report.ds_condition_held
        assert np.linalg.norm(report.reconstruction - x) / np.linalg.norm(x) < 1e-8

    def test_full_model_identity_sampling_recovers_anything(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        generator = build_generator(dec, Bandlimited(64))
        x = np.random.default_rng(3).standard_normal(64)
        report = recover(generator, identity_view(64), x.copy())
        assert np.max(np.abs(report.reconstruction - x)) < 1e-10

    def test_perfect_recovery_property_200_random_triples(self):
        # Every (graph, model, sampler) triple with M = K and the direct-sum
        # condition held must reconstruct exactly (up to 1e-7 relative).
        rng = np.random.default_rng(100)
        checked = 0
        trial = 0
        while checked < 200:
            trial += 1
            n = int(rng.integers(8, 21))
            graph = random_connected_sensor(n, seed=trial)
            dec = decompose_graph(graph, COMB)
            model_kind = checked % 4
            if model_kind == 0:
                k = int(rng.integers(1, n // 2 + 1))
                model = Bandlimited(k)
            elif model_kind == 1:
                k = int(rng.integers(1, 4))
                taus = 0.5 + 1.5 * np.arange(k) + rng.random(k)
                model = SpectralShapes(tuple(exp_decay_kernel(float(t)) for t in taus))
            elif model_kind == 2:
                divisors = [d for d in range(2, n + 1) if n % d == 0]
                k = int(rng.choice(divisors))
                model = PeriodicSpectrum(exp_decay_kernel(2.0), k)
            else:
                k = int(rng.integers(2, 5))
                nodes = rng.permutation(n)
                bounds = sorted(rng.choice(np.arange(1, n), size=k - 1, replace=False).tolist())
                cells = tuple(tuple(sorted(part.tolist())) for part in np.split(nodes, bounds))
                model = PiecewiseConstant(cells)
            generator = build_generator(dec, model)
            k = generator.shape[1]

            sampler_kind = checked % 3
            if sampler_kind == 0:
                nodes = greedy_rows(generator, k, Criterion.E_OPT).ordered_nodes
                view = vertex_sampler_view(graph, dec, VertexSampler(nodes))
            elif sampler_kind == 1:
                filtered = filter_matrix(dec, exp_decay_kernel(2.0)) @ generator
                nodes = greedy_rows(filtered, k, Criterion.E_OPT).ordered_nodes
                view = vertex_sampler_view(graph, dec, VertexSampler(nodes, prefilter=exp_decay_kernel(2.0)))
            else:
                if n % k != 0:
                    continue
                view = frequency_sampler_view(dec, FrequencySampler(exp_decay_kernel(2.0), k))

            held, _ = check_ds_condition(generator, view)
            if not held:
                continue
            x = synthesize(generator, rng.standard_normal(k))
            if np.linalg.norm(x) < 1e-9:
                continue
            report = recover(generator, view, view.apply(x))
            assert np.linalg.norm(report.reconstruction - x) / np.linalg.norm(x) < 1e-7, (
                f"triple {checked}: model {type(model).__name__}, sampler {sampler_kind}"
            )
            checked += 1

    def test_least_squares_when_ds_fails(self):
        # Singular sampled generator: the answer must beat every modeled
        # candidate in sample-space residual and stay inside the model range.
        g = paw_graph()
        dec = decompose_graph(g, COMB)
        generator = build_generator(dec, Bandlimited(2))
        view = vertex_sampler_view(g, dec, VertexSampler((2, 3)))
        samples = np.array([1.0, -0.5])
        report = recover(generator, view, samples)
        assert not report.ds_condition_held
        residual = np.linalg.norm(view.apply(report.reconstruction) - samples)
        assert abs(residual - report.residual_norm) < 1e-12
        rng = np.random.default_rng(4)
        for _ in range(100):
            z = rng.standard_normal(2)
            competitor = np.linalg.norm(view.apply(generator @ z) - samples)
            assert residual <= competitor + 1e-9
        back_projection = generator @ (pseudo_inverse(generator) @ report.reconstruction)
        assert np.max(np.abs(back_projection - report.reconstruction)) < 1e-10


class TestCorrectionKernel:
    def test_matched_ideal_lowpass_gives_unit_filter(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        period = 16
        low = SpectralKernel(
            lambda lam, cut=float(dec.eigenvalues[period - 1]): 1.0 if lam <= cut + 1e-12 else 0.0,
            "lowpass",
        )
        correction = pgs_correction_kernel(low, low, dec.eigenvalues, period)
        assert np.allclose(correction, np.ones(period), atol=1e-12)

    def test_filter_route_equals_pseudoinverse_route(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        period = 16
        generator_kernel = linear_decay_kernel(dec.lambda_max)
        sampling_kernel = exp_decay_kernel(2.0)
        generator = build_generator(dec, PeriodicSpectrum(generator_kernel, period))
        view = frequency_sampler_view(dec, FrequencySampler(sampling_kernel, period))
        x = synthesize(generator, 1.0 + np.random.default_rng(5).standard_normal(period))
        samples = view.apply(x)
        via_pinv = recover(generator, view, samples).reconstruction
        via_filter = recover_periodic_frequency(dec, generator_kernel, sampling_kernel, period, samples)
        assert np.linalg.norm(via_filter - via_pinv) / np.linalg.norm(x) < 1e-8
        assert np.linalg.norm(via_filter - x) / np.linalg.norm(x) < 1e-8

    def test_vanishing_cross_response_zeroes_the_filter(self):
        # Generator chosen so the first folded cross response cancels exactly;
        # the correction filter then matches the least-squares pseudoinverse.
        g = path_graph(4)
        dec = decompose_graph(g, COMB)
        period = 2
        sampling = table_kernel(dec.eigenvalues, [1.0, 1.0, 1.0, 1.0], "flat")
        generator = table_kernel(dec.eigenvalues, [1.0, 1.0, -1.0, 0.5], "cancelling")
        cross = folded_cross_response(sampling, generator, dec.eigenvalues, period)
        assert abs(cross[0]) < 1e-12
        assert abs(cross[1] - 1.5) < 1e-12
        correction = pgs_correction_kernel(sampling, generator, dec.eigenvalues, period)
        assert correction[0] == 0.0
        assert correction[1] == pytest.approx(1.0 / 1.5)

        gen_matrix = build_generator(dec, PeriodicSpectrum(generator, period))
        view = frequency_sampler_view(dec, FrequencySampler(sampling, period))
        samples = np.array([0.7, -0.2])
        via_pinv = recover(gen_matrix, view, samples).reconstruction
        via_filter = gen_matrix @ (correction * samples)
        assert np.max(np.abs(via_filter - via_pinv)) < 1e-10


class TestBandlimitedVertexRecovery:
    def test_agrees_with_generic_recover(self):
        rng = np.random.default_rng(6)
        for trial in range(10):
            graph = random_connected_sensor(16, seed=300 + trial)
            dec = decompose_graph(graph, COMB)
            bandwidth = int(rng.integers(2, 7))
            budget = bandwidth + int(rng.integers(0, 3))
            nodes = greedy_select(dec, bandwidth, budget, Criterion.E_OPT).ordered_nodes
            view = vertex_sampler_view(graph, dec, VertexSampler(nodes))
            generator = build_generator(dec, Bandlimited(bandwidth))
            samples = rng.standard_normal(budget)
            via_box = recover_bandlimited_vertex(dec, bandwidth, nodes, samples)
            via_generic = recover(generator, view, samples).reconstruction
            assert np.linalg.norm(via_box - via_generic) <= 1e-9 * max(1.0, np.linalg.norm(via_generic))

    def test_full_sampling_full_bandwidth_is_identity(self, p3):
        dec = decompose_graph(p3, COMB)
        x = np.array([0.4, -1.0, 2.0])
        out = recover_bandlimited_vertex(dec, 3, (0, 1, 2), x)
        assert np.max(np.abs(out - x)) < 1e-10

    def test_prefiltered_block_is_inverted(self, sensor64):
        dec = decompose_graph(sensor64, COMB)
        bandwidth = 8
        kernel = exp_decay_kernel(2.0)
        dense_filter = filter_matrix(dec, kernel)
        generator = build_generator(dec, Bandlimited(bandwidth))
        nodes = greedy_rows(dense_filter @ generator, bandwidth, Criterion.E_OPT).ordered_nodes
        view = vertex_sampler_view(sensor64, dec, VertexSampler(nodes, prefilter=kernel))
        x = synthesize(generator, np.random.default_rng(7).standard_normal(bandwidth))
        samples = view.apply(x)
        out = recover_bandlimited_vertex(dec, bandwidth, nodes, samples, prefilter_matrix=dense_filter)
        assert np.linalg.norm(out - x) / np.linalg.norm(x) < 1e-8


class TestRegularizedRecover:
    def test_identity_sampling_small_gamma_returns_samples(self):
        g = path_graph(12)
        lap = build_laplacian(g, COMB)
        c = np.random.default_rng(8).standard_normal(12)
        out = regularized_recover(identity_view(12), c, lap, gamma=1e-12)
        assert np.max(np.abs(out - c)) < 1e-6

    def test_large_gamma_flattens_solution(self):
        graph = random_connected_sensor(20, seed=9)
        dec = decompose_graph(graph, COMB)
        lap = build_laplacian(graph, COMB)
        view = vertex_sampler_view(graph, dec, VertexSampler((4,)))
        out = regularized_recover(view, np.array([2.0]), lap, gamma=1e6)
        assert np.linalg.norm(lap @ out) / np.linalg.norm(out) < 1e-3
        # Oracle: dense solve of the same normal equations.
        st = view.dense()
        dense = np.linalg.solve(st.T @ st + 1e6 * lap, st.T @ np.array([2.0]))
        assert np.max(np.abs(out - dense)) < 1e-8

    def test_cg_matches_dense_solve(self):
        graph = random_connected_sensor(30, seed=10)
        dec = decompose_graph(graph, COMB)
        lap = build_laplacian(graph, COMB)
        rng = np.random.default_rng(11)
        nodes = tuple(sorted(rng.choice(30, size=10, replace=False).tolist()))
        view = vertex_sampler_view(graph, dec, VertexSampler(nodes))
        c = rng.standard_normal(10)
        out = regularized_recover(view, c, lap, gamma=0.5)
        st = view.dense()
        dense = np.linalg.solve(st.T @ st + 0.5 * lap, st.T @ c)
        assert np.max(np.abs(out - dense)) < 1e-8

    def test_normal_equations_residual(self):
        graph = random_connected_sensor(40, seed=12)
        dec = decompose_graph(graph, COMB)
        lap = build_laplacian(graph, COMB)
        rng = np.random.default_rng(13)
        nodes = tuple(sorted(rng.choice(40, size=12, replace=False).tolist()))
        view = vertex_sampler_view(graph, dec, VertexSampler(nodes))
        c = rng.standard_normal(12)
        out = regularized_recover(view, c, lap, gamma=0.2)
        rhs = view.apply_transpose(c)
        lhs = view.apply_transpose(view.apply(out)) + 0.2 * (lap @ out)
        assert np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs) < 1e-8

    def test_gamma_must_be_positive(self):
        lap = build_laplacian(path_graph(4), COMB)
        with pytest.raises(ModelInvalid):
            regularized_recover(identity_view(4), np.ones(4), lap, gamma=0.0)
