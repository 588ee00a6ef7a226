"""Subspace signal models and recovery from samples.

A signal model is a recipe for a tall generator matrix A: any modeled signal
is x = A d for K expansion coefficients d. Recovery from samples c = S^T x is
the least-squares correction x~ = A (S^T A)^+ c, which is exact whenever the
direct-sum condition holds (S^T A invertible). For periodic-spectrum models
sampled in the frequency domain the correction collapses to a diagonal
spectral filter, computed here as a tabulated kernel.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ModelInvalid, SolverDiverged
from .filters import SpectralKernel
from .graphs import Graph, SpectralDecomposition, connected_components
from .linalg import conjugate_gradient, pseudo_inverse, smallest_singular_value
from .sampling import SamplingMatrixView

DS_TOL = 1e-8


@dataclass(frozen=True)
class Bandlimited:
    """Span of the lowest ``bandwidth`` frequency basis vectors."""

    bandwidth: int


@dataclass(frozen=True)
class SpectralShapes:
    """One fixed spectral shape per coefficient."""

    kernels: tuple[SpectralKernel, ...]


@dataclass(frozen=True)
class PeriodicSpectrum:
    """K-periodic spectrum shaped by a generator kernel (requires K | N)."""

    kernel: SpectralKernel
    period: int


@dataclass(frozen=True)
class PiecewiseConstant:
    """Constant on each cell of a vertex partition."""

    cells: tuple[tuple[int, ...], ...]


SubspaceModel = Bandlimited | SpectralShapes | PeriodicSpectrum | PiecewiseConstant


@dataclass(frozen=True)
class RecoveryReport:
    reconstruction: np.ndarray
    residual_norm: float
    ds_condition_held: bool
    conditioning: float


def periodic_generator(
    dec: SpectralDecomposition,
    kernel: SpectralKernel,
    period: int,
    allow_remainder: bool = False,
) -> np.ndarray:
    """Generator A = U a(Lambda) D_samp^T for a K-periodic spectrum model.

    Column i collects a(lambda_j) u_j over all j with j = i (mod K). With
    ``allow_remainder`` the trailing N mod K frequencies join their fold
    instead of being rejected.
    """
    n = dec.node_count
    if not 1 <= period <= n:
        raise ModelInvalid(f"period must lie in 1..{n}, got {period}")
    if n % period != 0 and not allow_remainder:
        raise ModelInvalid(f"period {period} does not divide {n} nodes")
    shaped = dec.eigenvectors * kernel.table(dec.eigenvalues)
    out = np.zeros((n, period))
    for i in range(period):
        out[:, i] = shaped[:, i::period].sum(axis=1)
    return out


def build_generator(dec: SpectralDecomposition, model: SubspaceModel) -> np.ndarray:
    """Materialize the N x K generator matrix of a subspace model."""
    n = dec.node_count
    if isinstance(model, Bandlimited):
        if not 1 <= model.bandwidth <= n:
            raise ModelInvalid(f"bandwidth must lie in 1..{n}, got {model.bandwidth}")
        return dec.eigenvectors[:, : model.bandwidth].copy()
    if isinstance(model, SpectralShapes):
        if not 1 <= len(model.kernels) <= n:
            raise ModelInvalid(f"need 1..{n} shapes, got {len(model.kernels)}")
        cols = [dec.eigenvectors @ k.table(dec.eigenvalues) for k in model.kernels]
        return np.column_stack(cols)
    if isinstance(model, PeriodicSpectrum):
        return periodic_generator(dec, model.kernel, model.period)
    if isinstance(model, PiecewiseConstant):
        cells = model.cells
        if not cells:
            raise ModelInvalid("partition has no cells")
        flat = [v for cell in cells for v in cell]
        if any(len(cell) == 0 for cell in cells):
            raise ModelInvalid("partition has an empty cell")
        if sorted(flat) != list(range(n)):
            raise ModelInvalid("cells must disjointly cover every node exactly once")
        out = np.zeros((n, len(cells)))
        for i, cell in enumerate(cells):
            out[list(cell), i] = 1.0
        return out
    raise ModelInvalid(f"unknown model {type(model).__name__}")


def partition_connectivity_warnings(g: Graph, cells: tuple[tuple[int, ...], ...]) -> list[int]:
    """Warn on partition cells that are not internally connected.

    Returns the indices of the offending cells; recovery itself still runs.
    """
    bad = []
    for i, cell in enumerate(cells):
        members = set(cell)
        sub_edges = [(u, v, w) for (u, v, w) in g.edges if u in members and v in members]
        relabel = {v: j for j, v in enumerate(sorted(members))}
        sub = Graph(
            node_count=len(members),
            edges=tuple((relabel[u], relabel[v], w) for u, v, w in sub_edges),
        )
        if len(connected_components(sub)) > 1:
            bad.append(i)
            warnings.warn(f"partition cell {i} is not internally connected", stacklevel=2)
    return bad


def synthesize(generator: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    generator = np.asarray(generator, dtype=float)
    coefficients = np.asarray(coefficients, dtype=float)
    if generator.ndim != 2 or coefficients.shape != (generator.shape[1],):
        raise DimensionMismatch(f"generator {generator.shape} vs coefficients {coefficients.shape}")
    return generator @ coefficients


def sampled_generator(generator: np.ndarray, sampler: SamplingMatrixView) -> np.ndarray:
    """S^T A, the M x K matrix the correction transform inverts."""
    generator = np.asarray(generator, dtype=float)
    if generator.shape[0] != sampler.cols:
        raise DimensionMismatch(f"generator rows {generator.shape[0]} vs sampler cols {sampler.cols}")
    return np.column_stack([sampler.apply(generator[:, j]) for j in range(generator.shape[1])])


def check_ds_condition(generator: np.ndarray, sampler: SamplingMatrixView) -> tuple[bool, float]:
    """Direct-sum check: smallest singular value of S^T A above DS_TOL.

    With fewer samples than coefficients the condition can never hold and the
    reported singular value is 0.
    """
    sa = sampled_generator(generator, sampler)
    if sa.shape[0] < sa.shape[1]:
        return False, 0.0
    sigma = smallest_singular_value(sa)
    return sigma > DS_TOL, sigma


def recover(generator: np.ndarray, sampler: SamplingMatrixView, samples: np.ndarray) -> RecoveryReport:
    """Least-squares recovery x~ = A (S^T A)^+ c.

    Exact on modeled signals when the direct-sum condition holds; otherwise
    returns the minimum-norm least-squares solution within the model range.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (sampler.rows,):
        raise DimensionMismatch(f"samples length {samples.shape} vs {sampler.rows} rows")
    sa = sampled_generator(generator, sampler)
    sigma = smallest_singular_value(sa) if sa.shape[0] >= sa.shape[1] else 0.0
    coefficients = pseudo_inverse(sa) @ samples
    reconstruction = np.asarray(generator, dtype=float) @ coefficients
    residual = float(np.linalg.norm(sampler.apply(reconstruction) - samples))
    return RecoveryReport(
        reconstruction=reconstruction,
        residual_norm=residual,
        ds_condition_held=bool(sigma > DS_TOL),
        conditioning=float(sigma),
    )


def recover_bandlimited_vertex(
    dec: SpectralDecomposition,
    bandwidth: int,
    nodes: tuple[int, ...] | list[int],
    samples: np.ndarray,
    prefilter_matrix: np.ndarray | None = None,
) -> np.ndarray:
    """Bandlimited recovery from node samples: x~ = U_VB (U_TB)^+ c.

    With a prefilter G applied before node-wise sampling the inverted block
    becomes (G U_VB) restricted to the sampled rows.
    """
    samples = np.asarray(samples, dtype=float)
    nodes = list(nodes)
    if len(nodes) < bandwidth:
        raise DimensionMismatch(f"{len(nodes)} samples cannot determine {bandwidth} coefficients")
    if samples.shape != (len(nodes),):
        raise DimensionMismatch(f"samples length {samples.shape} vs {len(nodes)} nodes")
    basis = dec.eigenvectors[:, :bandwidth]
    observed = basis if prefilter_matrix is None else np.asarray(prefilter_matrix, dtype=float) @ basis
    return basis @ (pseudo_inverse(observed[nodes, :]) @ samples)


def folded_cross_response(
    sampling_kernel: SpectralKernel,
    generator_kernel: SpectralKernel,
    eigenvalues: np.ndarray,
    period: int,
) -> np.ndarray:
    """R~_ga on the first K frequencies: sum over folds of g * a."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    n = eigenvalues.shape[0]
    if n % period != 0:
        raise ModelInvalid(f"period {period} does not divide {n} frequencies")
    product = sampling_kernel.table(eigenvalues) * generator_kernel.table(eigenvalues)
    return product.reshape(n // period, period).sum(axis=0)


def pgs_correction_kernel(
    sampling_kernel: SpectralKernel,
    generator_kernel: SpectralKernel,
    eigenvalues: np.ndarray,
    period: int,
) -> np.ndarray:
    """Tabulated correction filter h(lambda_i) = 1 / R~_ga(lambda_i), i < K.

    Frequencies whose folded cross response vanishes (within 1e-12) get
    h = 0, matching the least-squares pseudoinverse convention.
    """
    cross = folded_cross_response(sampling_kernel, generator_kernel, eigenvalues, period)
    out = np.zeros(period)
    alive = np.abs(cross) > 1e-12
    out[alive] = 1.0 / cross[alive]
    return out


def recover_periodic_frequency(
    dec: SpectralDecomposition,
    generator_kernel: SpectralKernel,
    sampling_kernel: SpectralKernel,
    period: int,
    samples: np.ndarray,
) -> np.ndarray:
    """Recovery of a periodic-spectrum signal by diagonal correction filtering.

    Equivalent to the generic pseudoinverse route when frequency-domain
    sampling with the same kernel produced the samples.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (period,):
        raise DimensionMismatch(f"samples length {samples.shape} vs period {period}")
    correction = pgs_correction_kernel(sampling_kernel, generator_kernel, dec.eigenvalues, period)
    restored = periodic_generator(dec, generator_kernel, period)
    return restored @ (correction * samples)


def regularized_recover(
    sampler: SamplingMatrixView,
    samples: np.ndarray,
    laplacian: np.ndarray,
    gamma: float,
    tol: float = 1e-10,
) -> np.ndarray:
    """Smoothness-regularized recovery x* = (S S^T + gamma L)^{-1} S c.

    Solved matrix-free by conjugate gradients; small systems (N <= 200) fall
    back to a dense solve if CG runs out of its 10 N iteration budget.
    """
    if gamma <= 0:
        raise ModelInvalid(f"gamma must be positive, got {gamma}")
    laplacian = np.asarray(laplacian, dtype=float)
    samples = np.asarray(samples, dtype=float)
    n = sampler.cols
    if laplacian.shape != (n, n):
        raise DimensionMismatch(f"laplacian {laplacian.shape} vs {n} nodes")
    if samples.shape != (sampler.rows,):
        raise DimensionMismatch(f"samples length {samples.shape} vs {sampler.rows} rows")

    rhs = sampler.apply_transpose(samples)

    def operator(v: np.ndarray) -> np.ndarray:
        return sampler.apply_transpose(sampler.apply(v)) + gamma * (laplacian @ v)

    try:
        return conjugate_gradient(operator, rhs, tol=tol, max_iter=10 * n)
    except SolverDiverged:
        if n > 200:
            raise
        st = sampler.dense()
        return np.linalg.solve(st.T @ st + gamma * laplacian, rhs)
