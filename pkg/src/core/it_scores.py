"""Information-theoretic (IT) outlier scores.

An IT score is the negative base-2 logarithm of the tail probability of a
feature statistic, i.e. a p-test in log form.  Conditional scores use the
distribution of the feature given the parents of a node; the joint score
merges several conditional scores into one calibrated score.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, logsumexp, xlogy

from .errors import ContractViolation
from .stat_tests import Reference, one_tailed_p, two_tailed_p

__all__ = [
    "ConditionalReference",
    "ITScore",
    "conditional_it_score",
    "it_score",
    "joint_convolution_bits",
    "joint_convolution_score",
    "two_sided_it_score",
]

_LN2 = math.log(2.0)

ConditionalReference = Mapping[tuple[Any, ...], Reference] | Callable[[tuple[Any, ...]], Reference]


@dataclass(slots=True, frozen=True)
class ITScore:
    """A log-form p-test for a named feature statistic."""

    bits: float
    feature_id: str = "tau"
    parent_values: tuple[Any, ...] | None = None

    def __post_init__(self) -> None:
        bits = float(self.bits)
        if math.isnan(bits) or bits < 0.0:
            raise ContractViolation(f"IT score must be a nonnegative number, got {bits!r}")
        object.__setattr__(self, "bits", bits)

    @property
    def is_conditional(self) -> bool:
        """Whether the score was computed relative to parent values."""

        return self.parent_values is not None


def _bits_of(probability: float) -> float:
    if probability <= 0.0:
        return math.inf
    return max(0.0, -math.log2(probability))


def it_score(tau_x: float, reference: Reference, *, feature_id: str = "tau") -> ITScore:
    """Return ``−log2 P(τ(X) >= τ(x))``."""

    p_value = one_tailed_p(tau_x, reference)
    return ITScore(bits=_bits_of(p_value.value), feature_id=feature_id)


def two_sided_it_score(tau_x: float, reference: Reference, *, feature_id: str = "tau") -> ITScore:
    """Return ``−log2`` of the two-tailed p-value of ``τ(x)``."""

    p_value = two_tailed_p(tau_x, reference)
    return ITScore(bits=_bits_of(p_value.value), feature_id=feature_id)


def _resolve_reference(
    parent_values: tuple[Any, ...], conditional_reference: ConditionalReference
) -> Reference:
    if isinstance(conditional_reference, Mapping):
        try:
            return conditional_reference[parent_values]
        except KeyError as exc:
            raise ContractViolation(
                f"no conditional reference for parent values {parent_values!r}"
            ) from exc
    reference = conditional_reference(parent_values)
    if reference is None:
        raise ContractViolation(f"no conditional reference for parent values {parent_values!r}")
    return reference


def conditional_it_score(
    tau_xj: float,
    parent_values: Sequence[Any],
    conditional_reference: ConditionalReference,
    *,
    feature_id: str = "tau",
) -> ITScore:
    """Return ``−log2 P(τ(X_j) >= τ(x_j) | PA_j = pa_j)``.

    ``conditional_reference`` is either a mapping keyed by the tuple of parent
    values or a factory called with that tuple; both must yield a reference
    accepted by :func:`it_score`.
    """

    parents = tuple(parent_values)
    reference = _resolve_reference(parents, conditional_reference)
    p_value = one_tailed_p(tau_xj, reference)
    return ITScore(bits=_bits_of(p_value.value), feature_id=feature_id, parent_values=parents)


def joint_convolution_bits(conditional_bits: ArrayLike) -> NDArray[np.float64]:
    """Vectorized joint score along the last axis.

    With ``S = ln2 · Σ bits`` the result is ``−log2`` of the Erlang survival
    ``e^{−S} Σ_{i<n} S^i / i!``, evaluated in the log domain.
    """

    values = np.asarray(conditional_bits, dtype=float)
    if values.ndim == 0 or values.shape[-1] < 1:
        raise ContractViolation("need at least one conditional score")
    if not np.all(np.isfinite(values)) or np.any(values < 0.0):
        raise ContractViolation("conditional scores must be finite and nonnegative")
    count = values.shape[-1]
    if count == 1:
        return values[..., 0].copy()
    nats = _LN2 * values.sum(axis=-1)
    index = np.arange(count, dtype=float)
    log_terms = xlogy(index, nats[..., np.newaxis]) - gammaln(index + 1.0)
    log_survival = logsumexp(log_terms, axis=-1) - nats
    return np.maximum(-log_survival / _LN2, 0.0)


def joint_convolution_score(conditional_bits: Sequence[float]) -> ITScore:
    """Merge conditional IT scores into one calibrated joint IT score."""

    bits = joint_convolution_bits(list(conditional_bits))
    return ITScore(bits=float(bits), feature_id="joint")
