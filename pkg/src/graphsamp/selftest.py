"""Built-in oracle suite behind the ``selftest`` CLI command.

Each check recomputes a quantity along two independent routes (matrix-free vs
dense, polynomial vs spectral, graph code vs classical DFT) and reports the
worst deviation. These mirror the repository's acceptance tests but run in a
few seconds without a test harness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .completion import CompletionProblem, apply_system, system_matrix_dense
from .filters import (
    PolynomialFilter,
    apply_spectral_filter,
    apply_vertex_filter,
    chebyshev_apply,
    chebyshev_fit,
    exp_decay_kernel,
)
from .generators import Community, Path, RandomSensor, gen_graph
from .graphs import VariationOperatorKind, build_laplacian, decompose_graph
from .linalg import pseudo_inverse
from .sampling import FrequencySampler, VertexSampler, frequency_sampler_view, vertex_sampler_view
from .selection import coherence_distribution


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _check(name: str, worst: float, bound: float) -> CheckResult:
    return CheckResult(name, worst < bound, f"max deviation {worst:.3e} (bound {bound:g})")


def _polynomial_filter_equivalence() -> CheckResult:
    rng = np.random.default_rng(11)
    worst = 0.0
    for trial in range(10):
        n = int(rng.integers(8, 40))
        graph = gen_graph(RandomSensor(n, min(4, n - 1), seed=trial))
        lap = build_laplacian(graph, VariationOperatorKind.COMBINATORIAL)
        dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
        filt = PolynomialFilter(tuple(rng.standard_normal(4) / 8.0))
        x = rng.standard_normal(n)
        vertex = apply_vertex_filter(lap, filt, x)
        spectral = apply_spectral_filter(dec, filt.kernel(), x)
        worst = max(worst, float(np.max(np.abs(vertex - spectral))))
    return _check("polynomial filter: vertex vs spectral", worst, 1e-9)


def _chebyshev_equivalence() -> CheckResult:
    rng = np.random.default_rng(12)
    graph = gen_graph(RandomSensor(64, 6, seed=3))
    lap = build_laplacian(graph, VariationOperatorKind.COMBINATORIAL)
    dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
    kernel = exp_decay_kernel(2.0)
    approx = chebyshev_fit(kernel, dec.lambda_max, order=30)
    worst = 0.0
    for _ in range(5):
        x = rng.standard_normal(64)
        exact = apply_spectral_filter(dec, kernel, x)
        cheb = chebyshev_apply(lap, approx, x)
        worst = max(worst, float(np.linalg.norm(cheb - exact) / np.linalg.norm(x)))
    return _check("chebyshev vs exact filtering", worst, 1e-8)


def _recovery_vs_normal_equations() -> CheckResult:
    rng = np.random.default_rng(13)
    worst = 0.0
    for trial in range(10):
        graph = gen_graph(RandomSensor(24, 4, seed=trial + 50))
        dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
        bandwidth = 5
        nodes = tuple(sorted(rng.choice(24, size=8, replace=False).tolist()))
        view = vertex_sampler_view(graph, dec, VertexSampler(nodes))
        generator = dec.eigenvectors[:, :bandwidth]
        samples = rng.standard_normal(8)
        via_pinv = generator @ (pseudo_inverse(generator[list(nodes), :]) @ samples)
        block = generator[list(nodes), :]
        via_normal = generator @ np.linalg.solve(block.T @ block, block.T @ samples)
        worst = max(worst, float(np.max(np.abs(via_pinv - via_normal))))
        del view
    return _check("pseudoinverse vs dense normal equations", worst, 1e-8)


def _completion_operator_vs_dense() -> CheckResult:
    rng = np.random.default_rng(14)
    row_graph = gen_graph(Path(5))
    col_graph = gen_graph(Community((3, 3), 0.9, 0.3, seed=2))
    mask = tuple((int(i), int(j)) for i in range(5) for j in range(6) if rng.random() < 0.4)
    prob = CompletionProblem(rng.standard_normal((5, 6)), mask, row_graph, col_graph, 0.3, 0.7)
    dense = system_matrix_dense(prob)
    worst = 0.0
    for _ in range(10):
        v = rng.standard_normal(30)
        worst = max(worst, float(np.max(np.abs(apply_system(prob, v) - dense @ v))))
    return _check("completion operator vs dense Kronecker", worst, 1e-10)


def _sampler_adjoints() -> CheckResult:
    rng = np.random.default_rng(15)
    graph = gen_graph(RandomSensor(32, 4, seed=9))
    dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
    views = [
        vertex_sampler_view(graph, dec, VertexSampler((3, 1, 20, 8), prefilter=exp_decay_kernel(2.0))),
        frequency_sampler_view(dec, FrequencySampler(exp_decay_kernel(2.0), 8)),
    ]
    worst = 0.0
    for view in views:
        for _ in range(10):
            x = rng.standard_normal(view.cols)
            y = rng.standard_normal(view.rows)
            worst = max(worst, abs(float(view.apply(x) @ y) - float(x @ view.apply_transpose(y))))
    return _check("sampler adjoint identity", worst, 1e-10)


def _coherence_normalization() -> CheckResult:
    worst = 0.0
    for seed in range(5):
        graph = gen_graph(RandomSensor(20, 4, seed=seed))
        dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
        for bandwidth in (1, 5, 20):
            p = coherence_distribution(dec, bandwidth)
            worst = max(worst, abs(float(p.sum()) - 1.0))
    return _check("coherence distribution normalization", worst, 1e-12)


def _dft_folding_identity() -> CheckResult:
    rng = np.random.default_rng(16)
    worst = 0.0
    for _ in range(16):
        x = rng.standard_normal(8)
        spectrum = np.fft.fft(x)
        folded = spectrum[:4] + spectrum[4:]
        worst = max(worst, float(np.max(np.abs(0.5 * folded - np.fft.fft(x[::2])))))
    return _check("dft decimation/folding identity", worst, 1e-12)


def run_selftest() -> list[CheckResult]:
    """Run every oracle check; returns one result per check."""
    return [
        _polynomial_filter_equivalence(),
        _chebyshev_equivalence(),
        _recovery_vs_normal_equations(),
        _completion_operator_vs_dense(),
        _sampler_adjoints(),
        _coherence_normalization(),
        _dft_folding_identity(),
    ]
