"""Computable lower bounds on (conditional) randomness deficiency.

The deficiency of ``x`` is ``−log P(x) − K(x | P)``.  ``K`` is replaced by a
compressor code length (an upper bound), which turns the difference into a
lower bound on the deficiency up to the grammar's constants.  The analytic
bounds cover Gaussian offsets, binary words and model switches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from ._compat import StrEnum

from scipy.special import rel_entr

from .errors import ContractViolation, ExactModeCoincidence
from .lzc import CompressorId, cond_complexity_estimate

__all__ = [
    "BinaryBoundMode",
    "DeficiencyEstimate",
    "binary_kl_bits",
    "binary_word_deficiency_bound",
    "deficiency_estimate",
    "gaussian_deficiency_bound",
    "gaussian_deficiency_components",
    "mahalanobis_deficiency_bound",
    "model_switch_bound",
]

LOG2_E = math.log2(math.e)
_LN2 = math.log(2.0)


class BinaryBoundMode(StrEnum):
    """Counting bound or its relative-entropy approximation."""

    EXACT = "exact"
    KL = "kl"


@dataclass(slots=True, frozen=True)
class DeficiencyEstimate:
    """Deficiency lower bound with its two components, in bits."""

    bits: float
    neg_log_prob_bits: float
    complexity_bits: float
    clamped: bool

    @classmethod
    def from_components(
        cls, neg_log_prob_bits: float, complexity_bits: float
    ) -> DeficiencyEstimate:
        """Build an estimate from ``−log2 P`` and a complexity estimate."""

        margin = float(neg_log_prob_bits) - float(complexity_bits)
        return cls(
            bits=max(0.0, margin),
            neg_log_prob_bits=float(neg_log_prob_bits),
            complexity_bits=float(complexity_bits),
            clamped=margin < 0.0,
        )

    @property
    def margin_bits(self) -> float:
        """Unclamped difference ``neg_log_prob_bits − complexity_bits``."""

        return self.neg_log_prob_bits - self.complexity_bits


def deficiency_estimate(
    neg_log_prob_bits: float,
    x: bytes | str,
    ctx: bytes | str = b"",
    c: CompressorId | str = CompressorId.LZ77,
) -> DeficiencyEstimate:
    """Lower-bound ``δ(x | ctx)`` by ``−log2 P(x | ctx) − R(x | ctx)``."""

    if not math.isfinite(neg_log_prob_bits):
        raise ContractViolation("neg_log_prob_bits must be finite")
    complexity = cond_complexity_estimate(x, ctx, c)
    return DeficiencyEstimate.from_components(neg_log_prob_bits, complexity)


def gaussian_deficiency_components(z: float) -> tuple[float, float]:
    """Return ``((log2 e)/2 · z², 2·log2 max(|z|, 2))``."""

    z = float(z)
    if math.isnan(z):
        raise ContractViolation("z must not be NaN")
    return LOG2_E / 2.0 * z * z, 2.0 * math.log2(max(abs(z), 2.0))


def gaussian_deficiency_bound(z: float) -> float:
    """Deficiency bound of a Gaussian observation ``z`` standard deviations from the mean."""

    if z == 0:
        raise ExactModeCoincidence(
            "exact-mode coincidence; use deficiency_estimate on the discretized value instead"
        )
    neg_log_prob, complexity = gaussian_deficiency_components(z)
    return max(0.0, neg_log_prob - complexity)


def mahalanobis_deficiency_bound(m2: float, x_inf: float, dims: int) -> float:
    """Multivariate Gaussian bound from a squared Mahalanobis distance ``m2``."""

    if m2 < 0 or math.isnan(m2) or dims < 1:
        raise ContractViolation("m2 must be nonnegative and dims positive")
    return max(0.0, LOG2_E / 2.0 * m2 - 2.0 * dims * math.log2(max(abs(x_inf), 2.0)))


def binary_kl_bits(q: float, p: float) -> float:
    """Binary relative entropy ``D(q ‖ p)`` in bits (``0 log 0 = 0``)."""

    return float(rel_entr(q, p) + rel_entr(1.0 - q, 1.0 - p)) / _LN2


def binary_word_deficiency_bound(
    m: int,
    l: int,  # noqa: E741 - Hamming weight
    p: float,
    mode: BinaryBoundMode | str = BinaryBoundMode.EXACT,
    *,
    clamp: bool = True,
) -> float:
    """Deficiency bound for an ``m``-bit word of Hamming weight ``l`` under Bernoulli(``p``).

    ``exact`` counts the words of weight ``l`` and pays ``log2(m + 1)`` bits to
    name the weight; ``kl`` is ``m · D(l/m ‖ p)``.  With ``clamp=False`` the
    exact mode returns the raw log e-value, whose ratio form has expectation
    exactly one.
    """

    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ContractViolation(f"m must be a positive integer, got {m!r}")
    if int(l) != l or not 0 <= l <= m:
        raise ContractViolation(f"l must be an integer in [0, {m}], got {l!r}")
    if not 0.0 < p < 1.0:
        raise ContractViolation(f"p must lie in (0, 1), got {p!r}")
    m, l = int(m), int(l)  # noqa: E741

    if BinaryBoundMode(mode) is BinaryBoundMode.KL:
        raw = m * binary_kl_bits(l / m, p)
    else:
        raw = (
            -l * math.log2(p)
            - (m - l) * math.log2(1.0 - p)
            - math.log2(math.comb(m, l))
            - math.log2(m + 1)
        )
    return max(0.0, raw) if clamp else raw


def model_switch_bound(log_p_x: float, log_palt_x: float, desc_cost_bits: float) -> float:
    """Deficiency gained by switching to a cheaper-to-describe alternative model."""

    if not math.isfinite(log_p_x):
        raise ContractViolation("log P(x) must be finite")
    if desc_cost_bits < 0:
        raise ContractViolation("description cost must be nonnegative")
    return max(0.0, (log_palt_x - log_p_x) - desc_cost_bits)
