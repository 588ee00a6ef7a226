"""Exception types raised by the toolkit."""


class GraphSampError(ValueError):
    """Base class for all toolkit errors."""


class DimensionMismatch(GraphSampError):
    """Operand shapes are inconsistent."""


class NonSymmetricOperator(GraphSampError):
    """A variation operator failed the symmetry tolerance."""


class IndexOutOfRange(GraphSampError):
    """A node or entry index falls outside the valid range."""


class NotDivisible(GraphSampError):
    """A folding ratio does not divide the signal length."""


class ModelInvalid(GraphSampError):
    """A subspace model violates its structural invariants."""


class SingularInformationMatrix(GraphSampError):
    """The information matrix of a sampling set is not invertible."""


class InsufficientSupport(GraphSampError):
    """A probability vector has fewer positive entries than requested draws."""


class SolverDiverged(GraphSampError):
    """An iterative solver exhausted its iteration budget."""


class SingularSystem(GraphSampError):
    """A linear system is numerically singular with an inconsistent right-hand side."""


class BudgetTooLarge(GraphSampError):
    """A sampling budget exceeds the number of available candidates."""


class IntervalTooSmall(GraphSampError):
    """A polynomial approximation interval does not cover the operator spectrum."""


class NonFiniteKernel(GraphSampError):
    """A spectral kernel evaluated to a non-finite value."""


class InvalidSpec(GraphSampError):
    """A generator or experiment specification is malformed."""
