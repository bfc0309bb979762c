"""Exception hierarchy for the engine."""
from __future__ import annotations

__all__ = [
    "AdlvLabError",
    "MalformedDocument",
    "InconsistentCartan",
    "LatticeNotBetweenQandP",
    "FrobeniusNotBasePreserving",
    "MalformedElement",
    "UsageError",
    "UnsupportedFrame",
    "SingularBasis",
    "SearchBudgetExceeded",
    "InfiniteSupport",
    "InfiniteType",
    "ParityViolation",
    "CrossCheckMismatch",
    "IdentityViolation",
    "ConventionUnverified",
]


class AdlvLabError(Exception):
    """Base class for every error raised by the engine."""


# ---- input errors


class MalformedDocument(AdlvLabError, ValueError):
    """Group-datum text does not parse or lacks required fields."""


class InconsistentCartan(AdlvLabError, ValueError):
    """Cartan type label or derived Cartan data is invalid."""


class LatticeNotBetweenQandP(AdlvLabError, ValueError):
    """Declared lattice does not sit between the coroot and coweight lattices."""


class FrobeniusNotBasePreserving(AdlvLabError, ValueError):
    """Frobenius data does not permute the simple roots."""


class MalformedElement(AdlvLabError, ValueError):
    """Element or class-key text cannot be parsed."""


class UsageError(AdlvLabError, ValueError):
    """Invalid run configuration."""


class UnsupportedFrame(AdlvLabError, ValueError):
    """Operation needs a quasi-split frame (trivial Omega twist)."""


# ---- computation errors


class SingularBasis(AdlvLabError, RuntimeError):
    """Simple coroots do not form a basis of the rational lattice."""


class SearchBudgetExceeded(AdlvLabError, RuntimeError):
    """A bounded search visited more nodes than its budget allows."""

    def __init__(self, what: str, budget: int) -> None:
        super().__init__(f"{what}: search budget of {budget} nodes exceeded")
        self.what = what
        self.budget = budget


class InfiniteSupport(AdlvLabError, RuntimeError):
    """Twisted support of a minimal element is not of finite type."""


class InfiniteType(AdlvLabError, RuntimeError):
    """Subset of affine simple reflections generates an infinite group."""


class ParityViolation(AdlvLabError, RuntimeError):
    """Dimension formula produced a non-integer or negative value."""


class CrossCheckMismatch(AdlvLabError, RuntimeError):
    """Two independent computations of the same invariant disagree."""


class IdentityViolation(AdlvLabError, RuntimeError):
    """The volume identity Q * vol_max = 1 failed."""


class ConventionUnverified(AdlvLabError, RuntimeError):
    """The lambda_b convention failed its self-calibration."""
