"""Shared error types for the scoring library."""

from __future__ import annotations

from collections.abc import Sequence


class DeficiencyError(Exception):
    """Base exception for known scoring errors."""


class ContractViolation(DeficiencyError, ValueError):
    """Raised when an operation is called outside its preconditions."""


class ExactModeCoincidence(ContractViolation):
    """Raised when an analytic bound is asked for an observation sitting on the mode."""


class UnsupportedObservation(DeficiencyError, ValueError):
    """Raised when the null hypothesis assigns zero probability to an observation."""


class NumericalDomainError(DeficiencyError, ArithmeticError):
    """Raised when a numerical routine leaves its domain (e.g. a non-PD covariance)."""


class ModelValidationError(DeficiencyError, ValueError):
    """Raised when a causal model document or object is invalid."""

    def __init__(self, message: str, *, field: str | None = None) -> None:
        self.field = field
        self.detail = message
        prefix = f"{field}: " if field else ""
        super().__init__(f"{prefix}{message}")


class CycleError(ModelValidationError):
    """Raised when the parent relation of a model contains a cycle."""

    def __init__(self, edges: Sequence[tuple[str, str]]) -> None:
        self.edges = tuple(edges)
        path = " -> ".join([edge[0] for edge in self.edges] + [self.edges[0][0]]) if edges else ""
        super().__init__(f"cycle detected: {path}", field="nodes")


class InputDataError(DeficiencyError, ValueError):
    """Raised when observation data does not match the model."""

    def __init__(
        self,
        message: str,
        *,
        missing: Sequence[str] = (),
        extra: Sequence[str] = (),
    ) -> None:
        self.missing = tuple(missing)
        self.extra = tuple(extra)
        details = []
        if self.missing:
            details.append(f"missing columns: {', '.join(self.missing)}")
        if self.extra:
            details.append(f"extra columns: {', '.join(self.extra)}")
        suffix = f" ({'; '.join(details)})" if details else ""
        super().__init__(f"{message}{suffix}")


class UsageError(DeficiencyError):
    """Raised when the command line is used incorrectly."""


__all__ = [
    "ContractViolation",
    "CycleError",
    "DeficiencyError",
    "ExactModeCoincidence",
    "InputDataError",
    "ModelValidationError",
    "NumericalDomainError",
    "UnsupportedObservation",
    "UsageError",
]
