"""Graph filters in both domains.

Vertex-domain filters are polynomials in the variation operator, applied by
iterated matrix-vector products. Frequency-domain filters evaluate a scalar
kernel on the eigenvalues. Chebyshev approximation bridges the two: it turns
a smooth kernel into a polynomial that can be applied without any
eigendecomposition, at cost O(P (|E| + N)) per signal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    IntervalTooSmall,
    InvalidSpec,
    NonFiniteKernel,
)
from .graphs import SpectralDecomposition


@dataclass(frozen=True)
class SpectralKernel:
    """Scalar frequency response g(lambda), finite on [0, lambda_max]."""

    evaluator: Callable[[float], float]
    name: str = "kernel"

    def __call__(self, lam: float) -> float:
        return float(self.evaluator(lam))

    def table(self, eigenvalues: np.ndarray) -> np.ndarray:
        """Evaluate the kernel on every eigenvalue."""
        return np.array([self.evaluator(float(lam)) for lam in np.asarray(eigenvalues)], dtype=float)


@dataclass(frozen=True)
class PolynomialFilter:
    """Filter sum_p c_p L^p with coefficients c_0..c_P."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise InvalidSpec("a polynomial filter needs at least c_0")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def kernel(self) -> SpectralKernel:
        """The same polynomial viewed as a frequency response."""
        coeffs = self.coefficients

        def evaluate(lam: float) -> float:
            acc = 0.0
            for c in reversed(coeffs):
                acc = acc * lam + c
            return acc

        return SpectralKernel(evaluate, name=f"polynomial[{self.order}]")


@dataclass(frozen=True)
class ChebyshevApprox:
    """Chebyshev series coefficients of a kernel on [0, lambda_max]."""

    coefficients: np.ndarray
    lambda_max: float

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=float))
        if self.lambda_max <= 0:
            raise IntervalTooSmall(f"lambda_max must be positive, got {self.lambda_max}")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, lam) -> np.ndarray:
        """Evaluate the series at scalar or vector lambda (for error checks)."""
        t = 2.0 * np.asarray(lam, dtype=float) / self.lambda_max - 1.0
        return np.polynomial.chebyshev.chebval(t, self.coefficients)


def apply_vertex_filter(operator: np.ndarray, f: PolynomialFilter, x: np.ndarray) -> np.ndarray:
    """Apply sum_p c_p L^p x by repeated matvecs; never forms L^p."""
    operator = np.asarray(operator, dtype=float)
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if operator.shape != (n, n):
        raise DimensionMismatch(f"operator {operator.shape} vs signal length {n}")
    coeffs = f.coefficients
    result = coeffs[0] * x
    power = x
    for c in coeffs[1:]:
        power = operator @ power
        result = result + c * power
    return result


def apply_spectral_filter(dec: SpectralDecomposition, kernel: SpectralKernel, x: np.ndarray) -> np.ndarray:
    """Apply U g(Lambda) U^T x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (dec.node_count,):
        raise DimensionMismatch(f"signal length {x.shape} vs {dec.node_count} nodes")
    response = kernel.table(dec.eigenvalues)
    return dec.eigenvectors @ (response * (dec.eigenvectors.T @ x))


def filter_matrix(dec: SpectralDecomposition, kernel: SpectralKernel) -> np.ndarray:
    """Dense U g(Lambda) U^T, for prefilters and matrix views."""
    response = kernel.table(dec.eigenvalues)
    return (dec.eigenvectors * response) @ dec.eigenvectors.T


def chebyshev_fit(kernel: SpectralKernel, lambda_max: float, order: int) -> ChebyshevApprox:
    """Interpolatory Chebyshev fit of ``kernel`` on [0, lambda_max].

    Uses order+1 Chebyshev nodes of the first kind (Gauss-Chebyshev
    quadrature), mapped to the interval by the affine change of variable
    lambda = lambda_max (t + 1) / 2.
    """
    if order < 0:
        raise InvalidSpec(f"order must be nonnegative, got {order}")
    if lambda_max <= 0:
        raise IntervalTooSmall(f"lambda_max must be positive, got {lambda_max}")

    def on_interval(t: np.ndarray) -> np.ndarray:
        lam = 0.5 * lambda_max * (np.asarray(t, dtype=float) + 1.0)
        values = np.array([kernel(v) for v in np.atleast_1d(lam)], dtype=float)
        if not np.all(np.isfinite(values)):
            raise NonFiniteKernel(f"kernel '{kernel.name}' non-finite on quadrature nodes")
        return values if np.ndim(t) else values[0]

    coeffs = np.polynomial.chebyshev.chebinterpolate(on_interval, order)
    return ChebyshevApprox(coefficients=coeffs, lambda_max=float(lambda_max))


def estimate_lambda_max(operator: np.ndarray, tol: float = 1e-6, max_iter: int = 10000) -> float:
    """Largest-eigenvalue estimate by power iteration (no inflation applied).

    Converges from below for PSD operators; callers sizing a Chebyshev
    interval should inflate the estimate (see ``chebyshev_interval``).
    """
    operator = np.asarray(operator, dtype=float)
    n = operator.shape[0]
    # Deterministic start with all Fourier components present.
    v = np.cos(np.arange(n, dtype=float)) + 1.5
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iter):
        w = operator @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        new_estimate = float(v @ (operator @ v))
        if abs(new_estimate - estimate) <= tol * max(1.0, abs(new_estimate)):
            return new_estimate
        estimate = new_estimate
    return estimate


def chebyshev_interval(operator: np.ndarray) -> float:
    """Power-iteration lambda_max with a 1% safety inflation."""
    return 1.01 * estimate_lambda_max(operator)


def _gershgorin_bound(operator: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(operator), axis=1)))


def chebyshev_apply(operator: np.ndarray, approx: ChebyshevApprox, x: np.ndarray) -> np.ndarray:
    """Apply the fitted kernel through the three-term Chebyshev recurrence.

    Raises IntervalTooSmall when the operator spectrum provably extends past
    the fit interval (cheap Gershgorin screen first, power iteration only
    when the screen is inconclusive).
    """
    operator = np.asarray(operator, dtype=float)
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if operator.shape != (n, n):
        raise DimensionMismatch(f"operator {operator.shape} vs signal length {n}")
    if _gershgorin_bound(operator) > approx.lambda_max:
        # Power iteration converges from below, so a strict exceedance is certain.
        estimate = estimate_lambda_max(operator)
        if estimate > approx.lambda_max * (1.0 + 1e-8):
            raise IntervalTooSmall(
                f"spectrum reaches {estimate:.6g}, fit interval ends at {approx.lambda_max:.6g}"
            )

    scale = 2.0 / approx.lambda_max
    coeffs = approx.coefficients

    def shifted(v: np.ndarray) -> np.ndarray:
        return scale * (operator @ v) - v

    t_prev = x
    result = coeffs[0] * t_prev
    if len(coeffs) > 1:
        t_curr = shifted(x)
        result = result + coeffs[1] * t_curr
        for c in coeffs[2:]:
            t_next = 2.0 * shifted(t_curr) - t_prev
            result = result + c * t_next
            t_prev, t_curr = t_curr, t_next
    return result


def localized_operator(dec: SpectralDecomposition, kernel: SpectralKernel, node: int) -> np.ndarray:
    """Vertex-domain impulse response of ``kernel`` centered at ``node``.

    Component n is sqrt(N) sum_k g(lambda_k) u_k[node] u_k[n]; equivalently
    sqrt(N) U g(Lambda) U^T delta_node.
    """
    n = dec.node_count
    if not 0 <= node < n:
        raise IndexOutOfRange(f"node {node} outside 0..{n - 1}")
    response = kernel.table(dec.eigenvalues)
    return np.sqrt(n) * (dec.eigenvectors @ (response * dec.eigenvectors[node, :]))


def localized_operator_matrix(dec: SpectralDecomposition, kernel: SpectralKernel) -> np.ndarray:
    """All impulse responses at once; column i is the response centered at i."""
    return np.sqrt(dec.node_count) * filter_matrix(dec, kernel)


# ---------------------------------------------------------------------------
# Named kernel registry (CLI / service configs)
# ---------------------------------------------------------------------------

def identity_kernel() -> SpectralKernel:
    return SpectralKernel(lambda lam: 1.0, name="identity")


def ideal_lowpass_kernel(eigenvalues: np.ndarray, bands: int) -> SpectralKernel:
    """1 on the lowest ``bands`` frequencies, 0 above.

    The cut is placed at lambda_bands via a threshold on lambda, so
    numerically repeated eigenvalues always receive the same response.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if not 1 <= bands <= len(eigenvalues):
        raise InvalidSpec(f"bands must lie in 1..{len(eigenvalues)}, got {bands}")
    cutoff = float(eigenvalues[bands - 1])
    return SpectralKernel(lambda lam: 1.0 if lam <= cutoff + 1e-12 else 0.0,
                          name=f"ideal_lowpass:{bands}")


def exp_decay_kernel(tau: float) -> SpectralKernel:
    if tau <= 0:
        raise InvalidSpec(f"tau must be positive, got {tau}")
    return SpectralKernel(lambda lam: float(np.exp(-lam / tau)), name=f"exp_decay:{tau:g}")


def linear_decay_kernel(lambda_max: float) -> SpectralKernel:
    if lambda_max <= 0:
        raise InvalidSpec(f"lambda_max must be positive, got {lambda_max}")
    return SpectralKernel(lambda lam: 1.0 - 2.0 * lam / lambda_max, name="linear_decay")


def resolve_kernel(
    name: str,
    eigenvalues: np.ndarray | None = None,
    lambda_max: float | None = None,
) -> SpectralKernel:
    """Build a kernel from its registry name.

    Registry: ``identity``, ``ideal_lowpass:K``, ``exp_decay:tau``,
    ``linear_decay``, ``polynomial:c0,c1,...``. Kernels that depend on the
    spectrum (ideal_lowpass, linear_decay) need ``eigenvalues`` or
    ``lambda_max`` from the caller.
    """
    head, _, arg = name.partition(":")
    if head == "identity":
        return identity_kernel()
    if head == "ideal_lowpass":
        if eigenvalues is None:
            raise InvalidSpec("ideal_lowpass needs the eigenvalues of the target operator")
        return ideal_lowpass_kernel(eigenvalues, int(arg))
    if head == "exp_decay":
        return exp_decay_kernel(float(arg))
    if head == "linear_decay":
        if lambda_max is None:
            if eigenvalues is None:
                raise InvalidSpec("linear_decay needs lambda_max or the eigenvalues")
            lambda_max = float(np.asarray(eigenvalues)[-1])
        return linear_decay_kernel(lambda_max)
    if head == "polynomial":
        coeffs = tuple(float(c) for c in arg.split(","))
        return PolynomialFilter(coeffs).kernel()
    raise InvalidSpec(f"unknown kernel '{name}'")
