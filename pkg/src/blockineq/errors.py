"""Exception hierarchy shared by all blockineq modules."""

from __future__ import annotations


class BlockineqError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(BlockineqError, ValueError):
    """Operands have incompatible or invalid dimensions."""


class BlockIndexError(BlockineqError, IndexError):
    """Block index outside the valid range of a block matrix."""


class HermiticityError(BlockineqError, ValueError):
    """Input is not Hermitian within the required tolerance."""


class ConvergenceError(BlockineqError, RuntimeError):
    """Eigensolver failed to converge within the sweep budget.

    Carries the final off-diagonal Frobenius mass in ``offdiag_residual``.
    """

    def __init__(self, message: str, offdiag_residual: float):
        super().__init__(message)
        self.offdiag_residual = offdiag_residual


class UsageError(BlockineqError, ValueError):
    """Invalid argument combination (unknown name, bad cardinality, ...)."""


class PreconditionError(BlockineqError, ValueError):
    """An inequality checker was handed input outside its hypothesis.

    ``min_eig`` holds the offending minimum eigenvalue when the violated
    hypothesis is a positivity requirement.
    """

    def __init__(self, message: str, min_eig: float | None = None):
        super().__init__(message)
        self.min_eig = min_eig


class ParseError(BlockineqError, ValueError):
    """A matrix/map document could not be parsed."""


class ValidationError(BlockineqError, ValueError):
    """A parsed document is well-formed JSON but violates the schema."""
