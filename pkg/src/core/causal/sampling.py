"""Ancestral sampling, noise recovery and anomaly injection."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import reduce
from operator import xor

import networkx as nx
import numpy as np
import structlog

from ..errors import ContractViolation, UnsupportedObservation
from .model import (
    CausalModel,
    Deterministic,
    LinearGaussian,
    Observation,
    UniformBits,
    UniformDigits,
    Value,
    XorConst,
    format_digits,
    to_decimal,
)

__all__ = [
    "OneDigitNoise",
    "SetNoise",
    "inject_anomaly",
    "propagate",
    "recover_noise",
    "sample",
]

logger = structlog.get_logger(__name__)


@dataclass(slots=True, frozen=True)
class SetNoise:
    """Override a node's noise with an explicit value."""

    value: Value | Decimal


@dataclass(slots=True, frozen=True)
class OneDigitNoise:
    """Set a ``uniform_digits`` noise to ``0.k000…0``."""

    digit: int

    def __post_init__(self) -> None:
        if isinstance(self.digit, bool) or self.digit not in range(10):
            raise ContractViolation(f"digit must be in 0..9, got {self.digit!r}")


AnomalySpec = SetNoise | OneDigitNoise


def _draw_noise(mechanism: object, rng: np.random.Generator) -> Value | None:
    if isinstance(mechanism, LinearGaussian):
        return float(rng.normal(0.0, mechanism.noise_sd))
    if isinstance(mechanism, UniformDigits):
        digits = rng.integers(0, 10, size=mechanism.digits)
        return "0." + "".join(str(digit) for digit in digits)
    if isinstance(mechanism, UniformBits):
        size = (mechanism.bits + 7) // 8
        return int.from_bytes(rng.bytes(size), "big") >> (8 * size - mechanism.bits)
    return None


def propagate(model: CausalModel, noise: Mapping[str, Value | None]) -> dict[str, Value]:
    """Evaluate every mechanism in topological order from the given noise values."""

    values: dict[str, Value] = {}
    for node in model.order:
        mechanism = model.mechanisms[node]
        parents = [values[parent] for parent in model.parents[node]]
        if isinstance(mechanism, LinearGaussian):
            terms = [c * float(p) for c, p in zip(mechanism.coefficients, parents, strict=True)]
            values[node] = math.fsum([*terms, float(noise[node])])
        elif isinstance(mechanism, UniformDigits):
            with localcontext() as context:
                context.prec = mechanism.digits + 32
                total = sum((to_decimal(p) for p in parents), to_decimal(noise[node]))
                values[node] = format_digits(total, mechanism.digits)
        elif isinstance(mechanism, UniformBits):
            values[node] = reduce(xor, parents, int(noise[node]))
        elif isinstance(mechanism, XorConst):
            values[node] = reduce(xor, parents, mechanism.constant)
        else:
            assert isinstance(mechanism, Deterministic)
            values[node] = mechanism.apply([float(p) for p in parents])
    return values


def sample(model: CausalModel, seed: int, count: int) -> list[Observation]:
    """Draw ``count`` observations by ancestral sampling; deterministic given ``seed``."""

    if count < 1:
        raise ContractViolation("count must be a positive integer")
    rng = np.random.default_rng(seed)
    observations = []
    for _ in range(count):
        noise = {node: _draw_noise(model.mechanisms[node], rng) for node in model.order}
        observations.append(Observation(values=propagate(model, noise), noise=noise))
    logger.debug("sampled", nodes=len(model.nodes), count=count, seed=seed)
    return observations


def recover_noise(model: CausalModel, observation: Observation) -> dict[str, Value | None]:
    """Invert the mechanisms of ``observation`` to obtain its noise values."""

    observation.check(model)
    values = observation.values
    noise: dict[str, Value | None] = {}
    for node in model.order:
        mechanism = model.mechanisms[node]
        parents = [values[parent] for parent in model.parents[node]]
        if isinstance(mechanism, LinearGaussian):
            noise[node] = float(values[node]) - math.fsum(
                c * float(p) for c, p in zip(mechanism.coefficients, parents, strict=True)
            )
        elif isinstance(mechanism, UniformDigits):
            with localcontext() as context:
                context.prec = mechanism.digits + 32
                parent_sum = sum((to_decimal(p) for p in parents), Decimal(0))
                residual = to_decimal(values[node]) - parent_sum
            if not Decimal(0) <= residual < Decimal(1):
                raise UnsupportedObservation(
                    f"{node}: value is outside the support given its parents"
                )
            noise[node] = format_digits(residual, mechanism.digits)
        elif isinstance(mechanism, UniformBits):
            noise[node] = reduce(xor, parents, int(values[node]))
        else:
            noise[node] = None
    return noise


def _noise_for(mechanism: object, spec: AnomalySpec, node: str) -> Value:
    if isinstance(spec, OneDigitNoise):
        if not isinstance(mechanism, UniformDigits):
            raise ContractViolation(f"one_digit_noise needs a uniform_digits node, {node!r} is not")
        return f"0.{spec.digit}" + "0" * (mechanism.digits - 1)

    if isinstance(mechanism, LinearGaussian):
        value = float(spec.value)
        if not math.isfinite(value):
            raise ContractViolation("noise value must be finite")
        return value
    if isinstance(mechanism, UniformDigits):
        noise = to_decimal(spec.value)
        if not Decimal(0) <= noise < Decimal(1):
            raise ContractViolation("uniform_digits noise must lie in [0, 1)")
        rendered = format_digits(noise, mechanism.digits)
        if Decimal(rendered) != noise:
            raise ContractViolation(f"noise has more than {mechanism.digits} digits")
        return rendered
    if isinstance(mechanism, UniformBits):
        value = spec.value
        if not isinstance(value, int) or not 0 <= value < (1 << mechanism.bits):
            raise ContractViolation(f"noise must be an integer below 2**{mechanism.bits}")
        return value
    raise ContractViolation(f"{node!r} has a deterministic mechanism and no noise to override")


def inject_anomaly(
    model: CausalModel,
    base: Observation | int,
    node: str,
    spec: AnomalySpec,
) -> Observation:
    """Override the noise of ``node`` and re-propagate its descendants.

    ``base`` is either an observation (its recorded noise is used, or recovered
    when absent) or a seed from which a single observation is drawn.
    """

    if node not in model.mechanisms:
        raise ContractViolation(f"unknown node {node!r}")
    if isinstance(base, Observation):
        noise = dict(base.noise) if base.noise is not None else recover_noise(model, base)
    else:
        noise = dict(sample(model, base, 1)[0].noise or {})
    noise[node] = _noise_for(model.mechanisms[node], spec, node)
    values = propagate(model, noise)
    if isinstance(base, Observation):
        changed = nx.descendants(model.graph(), node) | {node}
        values = {name: values[name] if name in changed else base.values[name] for name in values}
    return Observation(values=values, noise=noise)
