"""Graph container, variation operators, and the graph Fourier transform.

A graph is stored as a canonical sorted edge list over ``node_count`` vertices.
Variation operators (combinatorial and symmetrically normalized Laplacians)
are materialized densely; their eigendecomposition defines the frequency
domain used by every other module.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NonSymmetricOperator

SYMMETRY_TOL = 1e-10
SIGN_TOL = 1e-8


class VariationOperatorKind(enum.Enum):
    COMBINATORIAL = "combinatorial"
    SYMMETRIC_NORMALIZED = "symmetric_normalized"


class SignalDomain(enum.Enum):
    VERTEX = "vertex"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph without self-loops.

    Edges are normalized to ``(min(u, v), max(u, v), weight)`` triples, sorted,
    with each unordered pair appearing at most once. Weights must be
    nonnegative and finite.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.node_count < 1:
            raise IndexOutOfRange(f"node_count must be positive, got {self.node_count}")
        canonical = []
        seen = set()
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise IndexOutOfRange(f"self-loop at node {u}")
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise IndexOutOfRange(f"edge ({u},{v}) outside 0..{self.node_count - 1}")
            if not np.isfinite(w) or w < 0:
                raise IndexOutOfRange(f"edge ({u},{v}) has invalid weight {w}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise IndexOutOfRange(f"duplicate edge {key}")
            seen.add(key)
            canonical.append((key[0], key[1], w))
        canonical.sort()
        object.__setattr__(self, "edges", tuple(canonical))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix W."""
        w = np.zeros((self.node_count, self.node_count))
        for u, v, weight in self.edges:
            w[u, v] = weight
            w[v, u] = weight
        return w

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def neighbors(self, node: int) -> list[int]:
        if not 0 <= node < self.node_count:
            raise IndexOutOfRange(f"node {node} outside 0..{self.node_count - 1}")
        out = []
        for u, v, w in self.edges:
            if w == 0.0:
                continue
            if u == node:
                out.append(v)
            elif v == node:
                out.append(u)
        return sorted(out)


def connected_components(g: Graph) -> list[list[int]]:
    """Connected components by breadth-first search, each sorted ascending."""
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    for u, v, w in g.edges:
        if w == 0.0:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * g.node_count
    components = []
    for start in range(g.node_count):
        if seen[start]:
            continue
        queue = deque([start])
        seen[start] = True
        comp = []
        while queue:
            node = queue.popleft()
            comp.append(node)
            for nxt in adj[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    queue.append(nxt)
        components.append(sorted(comp))
    return components


def build_laplacian(g: Graph, kind: VariationOperatorKind) -> np.ndarray:
    """Variation operator of ``g``: D - W, or its symmetric normalization.

    Zero-degree nodes contribute zero rows/columns in the normalized case
    (their D^{-1/2} entry is defined as 0), so disconnected inputs stay valid.
    """
    w = g.adjacency()
    deg = w.sum(axis=1)
    lap = np.diag(deg) - w
    if kind is VariationOperatorKind.COMBINATORIAL:
        return lap
    inv_sqrt = np.zeros_like(deg)
    positive = deg > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(deg[positive])
    normalized = inv_sqrt[:, None] * lap * inv_sqrt[None, :]
    # (A + A^T)/2 is bit-exactly symmetric, which the eigensolver relies on.
    return 0.5 * (normalized + normalized.T)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a variation operator, ascending, with canonical signs.

    ``eigenvectors`` holds orthonormal eigenvectors as columns; the pair
    defines the graph Fourier transform.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    operator_kind: VariationOperatorKind = VariationOperatorKind.COMBINATORIAL

    @property
    def node_count(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so the first entry with magnitude > SIGN_TOL is positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        significant = np.flatnonzero(np.abs(col) > SIGN_TOL)
        if significant.size and col[significant[0]] < 0:
            out[:, j] = -col
    return out


def eigendecompose(
    operator: np.ndarray,
    kind: VariationOperatorKind = VariationOperatorKind.COMBINATORIAL,
) -> SpectralDecomposition:
    """Full symmetric eigendecomposition with a deterministic sign convention.

    Raises NonSymmetricOperator when max|A - A^T| exceeds 1e-10.
    """
    operator = np.asarray(operator, dtype=float)
    if operator.ndim != 2 or operator.shape[0] != operator.shape[1]:
        raise DimensionMismatch(f"operator must be square, got {operator.shape}")
    asymmetry = float(np.max(np.abs(operator - operator.T))) if operator.size else 0.0
    if asymmetry > SYMMETRY_TOL:
        raise NonSymmetricOperator(f"max|A - A^T| = {asymmetry:.3e} exceeds {SYMMETRY_TOL}")
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (operator + operator.T))
    return SpectralDecomposition(
        eigenvalues=eigenvalues,
        eigenvectors=canonical_signs(eigenvectors),
        operator_kind=kind,
    )


def decompose_graph(g: Graph, kind: VariationOperatorKind) -> SpectralDecomposition:
    return eigendecompose(build_laplacian(g, kind), kind)


def gft(dec: SpectralDecomposition, x: np.ndarray) -> np.ndarray:
    """Forward transform U^T x from the vertex to the frequency domain."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.node_count,):
        raise DimensionMismatch(f"signal length {x.shape} vs {dec.node_count} nodes")
    return dec.eigenvectors.T @ x


def igft(dec: SpectralDecomposition, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform U xhat back to the vertex domain."""
    xhat = np.asarray(xhat, dtype=float)
    if xhat.shape != (dec.node_count,):
        raise DimensionMismatch(f"spectrum length {xhat.shape} vs {dec.node_count} nodes")
    return dec.eigenvectors @ xhat


@dataclass(frozen=True)
class GraphSignal:
    """Signal values tagged with the domain they live in."""

    values: np.ndarray = field(repr=False)
    domain: SignalDomain = SignalDomain.VERTEX

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1:
            raise DimensionMismatch("a graph signal is one value per node")
