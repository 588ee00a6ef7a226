"""Sampling operators in the vertex and graph frequency domains.

Both samplers expose the same operator interface: ``apply`` maps a length-N
signal to its M samples (the action of S^T), ``apply_transpose`` maps back
(the action of S). Vertex sampling picks signal values on a node set after an
optional prefilter; frequency sampling filters the spectrum and folds it with
period M, aliasing everything outside the first M frequencies.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotDivisible
from .filters import PolynomialFilter, SpectralKernel, apply_spectral_filter, apply_vertex_filter, filter_matrix
from .graphs import Graph, SpectralDecomposition, build_laplacian, gft


@dataclass(frozen=True)
class SamplingMatrixView:
    """Matrix-free view of a sampling operator S^T (rows x cols = M x N)."""

    rows: int
    cols: int
    apply: Callable[[np.ndarray], np.ndarray]
    apply_transpose: Callable[[np.ndarray], np.ndarray]

    def dense(self) -> np.ndarray:
        """Materialize S^T as an M x N matrix from the defining operators."""
        out = np.zeros((self.rows, self.cols))
        eye = np.eye(self.cols)
        for j in range(self.cols):
            out[:, j] = self.apply(eye[:, j])
        return out


def identity_view(n: int) -> SamplingMatrixView:
    """S^T = I, useful as the trivial sampler."""
    return SamplingMatrixView(rows=n, cols=n, apply=lambda x: np.asarray(x, dtype=float).copy(),
                              apply_transpose=lambda c: np.asarray(c, dtype=float).copy())


@dataclass(frozen=True)
class VertexSampler:
    """Node-subset sampler c = I_TV G x with an optional prefilter G.

    ``nodes`` is an ordered list: sample j pairs with nodes[j]. Passing a set
    stores it sorted ascending; sequences keep their explicit order.
    """

    nodes: tuple[int, ...]
    prefilter: SpectralKernel | PolynomialFilter | None = None

    def __post_init__(self):
        nodes = self.nodes
        if isinstance(nodes, (set, frozenset)):
            nodes = sorted(nodes)
        nodes = tuple(int(v) for v in nodes)
        if len(nodes) == 0:
            raise IndexOutOfRange("sampling set must not be empty")
        if len(set(nodes)) != len(nodes):
            raise IndexOutOfRange("sampling set contains repeated nodes")
        object.__setattr__(self, "nodes", nodes)

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class FrequencySampler:
    """Spectral sampler c = D_samp g(Lambda) U^T x with folding period M."""

    kernel: SpectralKernel
    ratio: int

    def __post_init__(self):
        if self.ratio < 1:
            raise NotDivisible(f"ratio must be positive, got {self.ratio}")


def _check_nodes(nodes: tuple[int, ...], n: int):
    for v in nodes:
        if not 0 <= v < n:
            raise IndexOutOfRange(f"node {v} outside 0..{n - 1}")


def _prefilter_signal(
    g: Graph,
    dec: SpectralDecomposition,
    prefilter: SpectralKernel | PolynomialFilter | None,
    x: np.ndarray,
) -> np.ndarray:
    if prefilter is None:
        return x
    if isinstance(prefilter, PolynomialFilter):
        return apply_vertex_filter(build_laplacian(g, dec.operator_kind), prefilter, x)
    return apply_spectral_filter(dec, prefilter, x)


def vertex_sample(g: Graph, dec: SpectralDecomposition, vs: VertexSampler, x: np.ndarray) -> np.ndarray:
    """Sample x on the node set, after the prefilter when one is present."""
    x = np.asarray(x, dtype=float)
    if x.shape != (g.node_count,):
        raise DimensionMismatch(f"signal length {x.shape} vs {g.node_count} nodes")
    _check_nodes(vs.nodes, g.node_count)
    filtered = _prefilter_signal(g, dec, vs.prefilter, x)
    return filtered[list(vs.nodes)]


def fold_spectrum(xhat: np.ndarray, ratio: int) -> np.ndarray:
    """Fold a length-N spectrum with period M: c[j] = sum_l xhat[j + l M]."""
    xhat = np.asarray(xhat, dtype=float)
    n = xhat.shape[0]
    if ratio < 1 or n % ratio != 0:
        raise NotDivisible(f"ratio {ratio} does not divide signal length {n}")
    return xhat.reshape(n // ratio, ratio).sum(axis=0)


def folding_matrix(n: int, ratio: int) -> np.ndarray:
    """Dense folding matrix [I_M I_M ...] of shape M x N."""
    if ratio < 1 or n % ratio != 0:
        raise NotDivisible(f"ratio {ratio} does not divide signal length {n}")
    return np.tile(np.eye(ratio), (1, n // ratio))


def frequency_sample(dec: SpectralDecomposition, fs: FrequencySampler, x: np.ndarray) -> np.ndarray:
    """Filter the spectrum of x with the sampling kernel, then fold."""
    if dec.node_count % fs.ratio != 0:
        raise NotDivisible(f"ratio {fs.ratio} does not divide {dec.node_count} nodes")
    response = fs.kernel.table(dec.eigenvalues)
    return fold_spectrum(response * gft(dec, x), fs.ratio)


def vertex_sampler_view(g: Graph, dec: SpectralDecomposition, vs: VertexSampler) -> SamplingMatrixView:
    """Operator view of S^T = I_TV G (and its exact transpose)."""
    _check_nodes(vs.nodes, g.node_count)
    n = g.node_count
    index = list(vs.nodes)
    if vs.prefilter is None:
        def apply(x: np.ndarray) -> np.ndarray:
            return np.asarray(x, dtype=float)[index]

        def apply_transpose(c: np.ndarray) -> np.ndarray:
            out = np.zeros(n)
            out[index] = np.asarray(c, dtype=float)
            return out
    else:
        if isinstance(vs.prefilter, PolynomialFilter):
            kernel = vs.prefilter.kernel()
        else:
            kernel = vs.prefilter
        # G = U g(Lambda) U^T is symmetric, so S = G^T I^T scatters then filters.
        filt = filter_matrix(dec, kernel)

        def apply(x: np.ndarray) -> np.ndarray:
            return (filt @ np.asarray(x, dtype=float))[index]

        def apply_transpose(c: np.ndarray) -> np.ndarray:
            out = np.zeros(n)
            out[index] = np.asarray(c, dtype=float)
            return filt.T @ out

    return SamplingMatrixView(rows=vs.size, cols=n, apply=apply, apply_transpose=apply_transpose)


def frequency_sampler_view(dec: SpectralDecomposition, fs: FrequencySampler) -> SamplingMatrixView:
    """Operator view of S^T = D_samp g(Lambda) U^T (and its exact transpose)."""
    n = dec.node_count
    m = fs.ratio
    if n % m != 0:
        raise NotDivisible(f"ratio {m} does not divide {n} nodes")
    response = fs.kernel.table(dec.eigenvalues)
    u = dec.eigenvectors

    def apply(x: np.ndarray) -> np.ndarray:
        return fold_spectrum(response * (u.T @ np.asarray(x, dtype=float)), m)

    def apply_transpose(c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape != (m,):
            raise DimensionMismatch(f"sample length {c.shape} vs folding period {m}")
        return u @ (response * np.tile(c, n // m))

    return SamplingMatrixView(rows=m, cols=n, apply=apply, apply_transpose=apply_transpose)
