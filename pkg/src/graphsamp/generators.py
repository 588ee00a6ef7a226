"""Seeded synthetic graph generators for the experiment harness."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .graphs import Graph


@dataclass(frozen=True)
class RandomSensor:
    """k-nearest-neighbor graph of uniform points in the unit square.

    Edges are the symmetrized k-NN relation; weights are exp(-d^2 / (2 s^2))
    with s the mean distance over all k-NN pairs.
    """

    node_count: int
    k_neighbors: int = 6
    seed: int = 0


@dataclass(frozen=True)
class Community:
    """Planted-partition graph: p_in within clusters, p_out across, unit weights."""

    cluster_sizes: tuple[int, ...]
    p_in: float
    p_out: float
    seed: int = 0


@dataclass(frozen=True)
class Path:
    node_count: int


@dataclass(frozen=True)
class Cycle:
    node_count: int


@dataclass(frozen=True)
class Complete:
    node_count: int


GeneratorSpec = RandomSensor | Community | Path | Cycle | Complete


def community_labels(sizes: tuple[int, ...]) -> np.ndarray:
    """Cluster index per node for a community spec's size list."""
    labels = np.zeros(sum(sizes), dtype=int)
    start = 0
    for idx, size in enumerate(sizes):
        labels[start:start + size] = idx
        start += size
    return labels


def gen_graph(spec: GeneratorSpec) -> Graph:
    """Materialize a generator spec; random kinds are deterministic per seed."""
    if isinstance(spec, Path):
        if spec.node_count < 1:
            raise InvalidSpec(f"path needs at least 1 node, got {spec.node_count}")
        edges = tuple((i, i + 1, 1.0) for i in range(spec.node_count - 1))
        return Graph(spec.node_count, edges)

    if isinstance(spec, Cycle):
        if spec.node_count < 3:
            raise InvalidSpec(f"cycle needs at least 3 nodes, got {spec.node_count}")
        edges = tuple((i, (i + 1) % spec.node_count, 1.0) for i in range(spec.node_count))
        return Graph(spec.node_count, edges)

    if isinstance(spec, Complete):
        if spec.node_count < 2:
            raise InvalidSpec(f"complete graph needs at least 2 nodes, got {spec.node_count}")
        edges = tuple((i, j, 1.0) for i in range(spec.node_count) for j in range(i + 1, spec.node_count))
        return Graph(spec.node_count, edges)

    if isinstance(spec, Community):
        sizes = tuple(int(s) for s in spec.cluster_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise InvalidSpec(f"cluster sizes must be positive, got {sizes}")
        if not (0.0 <= spec.p_out <= spec.p_in <= 1.0):
            raise InvalidSpec(f"need 0 <= p_out <= p_in <= 1, got ({spec.p_in}, {spec.p_out})")
        n = sum(sizes)
        labels = community_labels(sizes)
        rng = np.random.default_rng(spec.seed)
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                p = spec.p_in if labels[i] == labels[j] else spec.p_out
                if rng.random() < p:
                    edges.append((i, j, 1.0))
        return Graph(n, tuple(edges))

    if isinstance(spec, RandomSensor):
        n, k = spec.node_count, spec.k_neighbors
        if n < 2 or not 1 <= k < n:
            raise InvalidSpec(f"need 1 <= k_neighbors < node_count, got ({n}, {k})")
        rng = np.random.default_rng(spec.seed)
        points = rng.random((n, 2))
        deltas = points[:, None, :] - points[None, :, :]
        distances = np.sqrt(np.sum(deltas * deltas, axis=2))
        np.fill_diagonal(distances, np.inf)
        neighbor_idx = np.argsort(distances, axis=1)[:, :k]
        neighbor_dists = np.take_along_axis(distances, neighbor_idx, axis=1)
        sigma = float(neighbor_dists.mean())
        pairs = set()
        for i in range(n):
            for j in neighbor_idx[i]:
                pairs.add((min(i, int(j)), max(i, int(j))))
        edges = tuple(
            (u, v, float(np.exp(-distances[u, v] ** 2 / (2.0 * sigma**2))))
            for u, v in sorted(pairs)
        )
        return Graph(n, edges)

    raise InvalidSpec(f"unknown generator spec {type(spec).__name__}")
