"""Sampling-set selection: deterministic greedy criteria and random designs.

All deterministic rules are greedy with ties broken by lowest node index, so
a budget-M run always extends the budget-(M-1) run (prefix property) and
results are reproducible regardless of evaluation order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InsufficientSupport,
    ModelInvalid,
    SingularInformationMatrix,
)
from .filters import SpectralKernel, localized_operator_matrix
from .graphs import SpectralDecomposition

_RANK_TOL = 1e-12
_TIE_TOL = 1e-12


def _improves(score: float, best: float | None, minimize: bool = False) -> bool:
    """Strict improvement beyond a relative tolerance.

    Numerically tied candidates (scores within ~1e-12) do not displace the
    incumbent, so ties resolve to the lowest node index regardless of
    last-ulp noise in the eigensolver.
    """
    if best is None:
        return True
    margin = _TIE_TOL * max(1.0, abs(best))
    return (score < best - margin) if minimize else (score > best + margin)


class Criterion(enum.Enum):
    A_OPT = "aopt"
    E_OPT = "eopt"


@dataclass(frozen=True)
class SelectionResult:
    ordered_nodes: tuple[int, ...]
    per_step_score: tuple[float, ...]
    criterion: str


def error_covariance(dec: SpectralDecomposition, bandwidth: int, nodes) -> np.ndarray:
    """Reconstruction-error covariance U_VB (U_TB^T U_TB)^{-1} U_VB^T."""
    nodes = list(nodes)
    basis = dec.eigenvectors[:, :bandwidth]
    info = basis[nodes, :].T @ basis[nodes, :]
    eigenvalues = np.linalg.eigvalsh(info)
    if eigenvalues[0] <= _RANK_TOL * max(eigenvalues[-1], 1.0):
        raise SingularInformationMatrix(
            f"information matrix of {len(nodes)} nodes at bandwidth {bandwidth} is singular"
        )
    return basis @ np.linalg.inv(info) @ basis.T


def _eopt_score(rows: np.ndarray) -> float:
    """Squared smallest singular value of the selected-row block.

    Equals the smallest eigenvalue of the information matrix once the set is
    at least as large as the bandwidth; below that it is the smallest
    eigenvalue of the row Gram, the continuous extension that keeps the
    greedy rule informative while the information matrix is still singular.
    """
    sigma = np.linalg.svd(rows, compute_uv=False)
    return float(sigma[-1] ** 2)


def _aopt_score(rows: np.ndarray, bandwidth: int) -> float:
    """Trace of the (pseudo)inverse information matrix; +inf disqualifies."""
    eigenvalues = np.linalg.eigvalsh(rows.T @ rows)
    tol = _RANK_TOL * max(float(eigenvalues[-1]), 1.0)
    positive = eigenvalues[eigenvalues > tol]
    if rows.shape[0] >= bandwidth and len(positive) < bandwidth:
        return float("inf")
    return float(np.sum(1.0 / positive)) if positive.size else float("inf")


def greedy_rows(matrix: np.ndarray, budget: int, criterion: Criterion = Criterion.E_OPT) -> SelectionResult:
    """Greedy row selection from any N x K measurement matrix.

    E-opt maximizes the smallest singular value (squared) of the selected
    rows; A-opt minimizes the trace of the (pseudo)inverse information
    matrix. Candidate scores reduce by (score, lowest index).
    """
    matrix = np.asarray(matrix, dtype=float)
    n, bandwidth = matrix.shape
    if not 1 <= budget <= n:
        raise IndexOutOfRange(f"budget must lie in 1..{n}, got {budget}")
    selected: list[int] = []
    scores: list[float] = []
    remaining = list(range(n))
    for _ in range(budget):
        best_node = None
        best_score = None
        for node in remaining:
            rows = matrix[selected + [node], :]
            if criterion is Criterion.E_OPT:
                score = _eopt_score(rows)
                better = _improves(score, best_score)
            else:
                score = _aopt_score(rows, bandwidth)
                better = _improves(score, best_score, minimize=True)
            if better:
                best_score = score
                best_node = node
        selected.append(best_node)
        remaining.remove(best_node)
        scores.append(best_score)
    return SelectionResult(tuple(selected), tuple(scores), criterion.value)


def greedy_select(
    dec: SpectralDecomposition,
    bandwidth: int,
    budget: int,
    criterion: Criterion = Criterion.E_OPT,
) -> SelectionResult:
    """Greedy node selection for the bandlimited model at ``bandwidth``."""
    if not 1 <= bandwidth <= dec.node_count:
        raise ModelInvalid(f"bandwidth must lie in 1..{dec.node_count}, got {bandwidth}")
    return greedy_rows(dec.eigenvectors[:, :bandwidth], budget, criterion)


def regularized_objective(laplacian: np.ndarray, gamma: float, nodes) -> float:
    """Exact lambda_min(S S^T + gamma L) for a node indicator set."""
    laplacian = np.asarray(laplacian, dtype=float)
    indicator = np.zeros(laplacian.shape[0])
    indicator[list(nodes)] = 1.0
    return float(np.linalg.eigvalsh(np.diag(indicator) + gamma * laplacian)[0])


def greedy_select_regularized(laplacian: np.ndarray, gamma: float, budget: int) -> SelectionResult:
    """Greedy maximization of lambda_min(S S^T + gamma L)."""
    if gamma <= 0:
        raise ModelInvalid(f"gamma must be positive, got {gamma}")
    laplacian = np.asarray(laplacian, dtype=float)
    n = laplacian.shape[0]
    if not 1 <= budget <= n:
        raise IndexOutOfRange(f"budget must lie in 1..{n}, got {budget}")
    base = gamma * laplacian
    diag = np.zeros(n)
    selected: list[int] = []
    scores: list[float] = []
    remaining = list(range(n))
    for _ in range(budget):
        best_node = None
        best_score = None
        for node in remaining:
            trial = base.copy()
            trial[np.diag_indices(n)] += diag
            trial[node, node] += 1.0
            score = float(np.linalg.eigvalsh(trial)[0])
            if _improves(score, best_score):
                best_score = score
                best_node = node
        selected.append(best_node)
        diag[best_node] += 1.0
        remaining.remove(best_node)
        scores.append(best_score)
    return SelectionResult(tuple(selected), tuple(scores), "eopt-reg")


def greedy_select_localized(dec: SpectralDecomposition, kernel: SpectralKernel, budget: int) -> SelectionResult:
    """Greedy coverage selection driven by localized impulse responses.

    Each node carries a residual weight r[n] (initially 1). A step picks the
    center whose squared impulse response covers the most remaining weight,
    then discounts r under that response's footprint.
    """
    n = dec.node_count
    if not 1 <= budget <= n:
        raise IndexOutOfRange(f"budget must lie in 1..{n}, got {budget}")
    psi_sq = localized_operator_matrix(dec, kernel) ** 2
    residual = np.ones(n)
    selected: list[int] = []
    scores: list[float] = []
    remaining = list(range(n))
    for _ in range(budget):
        best_node = None
        best_score = None
        for node in remaining:
            score = float(psi_sq[:, node] @ residual)
            if _improves(score, best_score):
                best_score = score
                best_node = node
        column = psi_sq[:, best_node]
        peak = float(column.max())
        if peak > 0.0:
            residual = residual * (1.0 - column / peak)
        selected.append(best_node)
        remaining.remove(best_node)
        scores.append(best_score)
    return SelectionResult(tuple(selected), tuple(scores), "localized")


def coherence_distribution(dec: SpectralDecomposition, bandwidth: int) -> np.ndarray:
    """Sampling probabilities p[i] = ||row i of the bandlimited block||^2 / K.

    At full bandwidth every row of an orthonormal basis has unit norm, so the
    distribution is exactly uniform.
    """
    n = dec.node_count
    if not 1 <= bandwidth <= n:
        raise ModelInvalid(f"bandwidth must lie in 1..{n}, got {bandwidth}")
    if bandwidth == n:
        return np.full(n, 1.0 / n)
    block = dec.eigenvectors[:, :bandwidth]
    return np.sum(block * block, axis=1) / bandwidth


def random_select(probabilities: np.ndarray, budget: int, seed: int) -> SelectionResult:
    """Seeded sequential sampling without replacement.

    After each draw the distribution is renormalized over the remaining
    nodes. The recorded score of a step is the renormalized probability of
    the drawn node.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch("probabilities must be a vector")
    if np.any(p < 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise ModelInvalid("probabilities must be nonnegative and sum to 1")
    support = int(np.count_nonzero(p > 0))
    if budget > support:
        raise InsufficientSupport(f"budget {budget} exceeds {support} nodes with positive probability")
    rng = np.random.default_rng(seed)
    weights = p.copy()
    selected: list[int] = []
    scores: list[float] = []
    for _ in range(budget):
        total = weights.sum()
        current = weights / total
        node = int(rng.choice(len(current), p=current))
        selected.append(node)
        scores.append(float(current[node]))
        weights[node] = 0.0
    return SelectionResult(tuple(selected), tuple(scores), "random")
