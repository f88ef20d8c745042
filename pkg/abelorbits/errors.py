"""
Exception types for abelorbits

Input problems are ValueError subclasses so callers (and the CLI) can treat
them as usage errors. IntegrityError signals that computed data contradicts
itself and is turned into a failing report by the verify harness.
"""
from typing import Any, Optional


class RootSystemError(ValueError):
    """Bad family/rank, a vector that is not a root, or a family mismatch"""


class NotAnInvolutionError(ValueError):
    """Signed permutation is not an involution"""


class NotStronglyOrthogonalError(ValueError):
    """Root set fails the alpha +/- beta not in R test"""


class OverlappingSupportError(ValueError):
    """Root set is expected to have pairwise disjoint index supports"""


class NotNilpotentError(ValueError):
    """Matrix has no vanishing power"""


class NotInNilradicalError(ValueError):
    """Matrix is not a combination of positive root vectors"""


class NilradicalMismatchError(ValueError):
    """Two orbit labels belong to different nilradicals"""


class IntegrityError(RuntimeError):
    """
    Computed data violates a structural property.

    The payload is a JSON-serializable dict describing the offending data so
    that a verification report can carry it as its counterexample.
    """

    def __init__(self, message: str, payload: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.payload = payload or {}
