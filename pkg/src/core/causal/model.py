"""Causal model types: mechanisms, models and observations."""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from .._compat import StrEnum
from types import MappingProxyType
from typing import Any, ClassVar, TypeAlias

import networkx as nx

from ..errors import ContractViolation, CycleError, ModelValidationError

__all__ = [
    "CausalModel",
    "Deterministic",
    "DeterministicMap",
    "LinearGaussian",
    "MechanismKind",
    "MechanismSpec",
    "Observation",
    "UniformBits",
    "UniformDigits",
    "Value",
    "XorConst",
    "model_context",
    "parse_value",
    "render_value",
    "topological_order",
]

Value: TypeAlias = float | str | int
"""Reals are floats, digit strings are ``str`` and bit strings are ``int``."""

CONTEXT_JOINER = b","


class MechanismKind(StrEnum):
    """Supported mechanism families."""

    LINEAR_GAUSSIAN = "linear_gaussian"
    UNIFORM_DIGITS = "uniform_digits"
    UNIFORM_BITS = "uniform_bits"
    XOR_CONST = "xor_const"
    DETERMINISTIC = "deterministic"


class DeterministicMap(StrEnum):
    """Named maps available to deterministic mechanisms."""

    IDENTITY = "identity"
    SUM = "sum"
    NEGATE = "negate"
    CONSTANT = "constant"


@dataclass(slots=True, frozen=True)
class LinearGaussian:
    """``X = Σ coefficient_i · parent_i + N`` with ``N ~ N(0, noise_sd²)``."""

    kind: ClassVar[MechanismKind] = MechanismKind.LINEAR_GAUSSIAN

    coefficients: tuple[float, ...]
    noise_sd: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ModelValidationError("coefficients must be finite", field="coefficients")
        if not (math.isfinite(self.noise_sd) and self.noise_sd > 0):
            raise ModelValidationError("noise_sd must be positive", field="noise_sd")


@dataclass(slots=True, frozen=True)
class UniformDigits:
    """``X = Σ parents + N`` with ``N`` uniform on ``{0, 10^-d, …, 1 − 10^-d}``."""

    kind: ClassVar[MechanismKind] = MechanismKind.UNIFORM_DIGITS

    digits: int

    def __post_init__(self) -> None:
        if isinstance(self.digits, bool) or int(self.digits) != self.digits or self.digits < 1:
            raise ModelValidationError("digit count must be a positive integer", field="d")


@dataclass(slots=True, frozen=True)
class UniformBits:
    """``X = XOR(parents) ⊕ N`` with ``N`` uniform on ``bits``-bit strings."""

    kind: ClassVar[MechanismKind] = MechanismKind.UNIFORM_BITS

    bits: int

    def __post_init__(self) -> None:
        if isinstance(self.bits, bool) or int(self.bits) != self.bits:
            raise ModelValidationError("bit width must be an integer", field="d")
        if self.bits < 4 or self.bits % 4:
            raise ModelValidationError("bit width must be a positive multiple of 4", field="d")


@dataclass(slots=True, frozen=True)
class XorConst:
    """``X = XOR(parents) ⊕ constant``; deterministic."""

    kind: ClassVar[MechanismKind] = MechanismKind.XOR_CONST

    constant: int
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 4 or self.bits % 4:
            raise ModelValidationError(
                "bit width must be a positive multiple of 4", field="constant"
            )
        if not 0 <= self.constant < (1 << self.bits):
            raise ModelValidationError("constant does not fit the node width", field="constant")

    @classmethod
    def from_hex(cls, text: str) -> XorConst:
        """Build from a hexadecimal constant; the width is four bits per digit."""

        if not text or not re.fullmatch(r"[0-9a-fA-F]+", text):
            raise ModelValidationError("constant must be a hexadecimal string", field="constant")
        return cls(constant=int(text, 16), bits=4 * len(text))


@dataclass(slots=True, frozen=True)
class Deterministic:
    """A named deterministic map of real-valued parents."""

    kind: ClassVar[MechanismKind] = MechanismKind.DETERMINISTIC

    map: DeterministicMap
    value: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "map", DeterministicMap(self.map))
        if self.map is DeterministicMap.CONSTANT:
            if self.value is None or not math.isfinite(self.value):
                raise ModelValidationError("constant map needs a finite value", field="value")
            object.__setattr__(self, "value", float(self.value))
        elif self.value is not None:
            raise ModelValidationError(f"map {self.map} takes no value", field="value")

    def apply(self, parents: Sequence[float]) -> float:
        """Evaluate the map."""

        if self.map is DeterministicMap.CONSTANT:
            return float(self.value)  # type: ignore[arg-type]
        if self.map is DeterministicMap.IDENTITY:
            return float(parents[0])
        if self.map is DeterministicMap.NEGATE:
            return -float(parents[0])
        return math.fsum(parents)


MechanismSpec: TypeAlias = LinearGaussian | UniformDigits | UniformBits | XorConst | Deterministic

_REAL_KINDS = frozenset({MechanismKind.LINEAR_GAUSSIAN, MechanismKind.DETERMINISTIC})
_BIT_KINDS = frozenset({MechanismKind.UNIFORM_BITS, MechanismKind.XOR_CONST})


def _graph(nodes: Sequence[str], parents: Mapping[str, Sequence[str]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    for child in nodes:
        graph.add_edges_from((parent, child) for parent in parents.get(child, ()))
    return graph


def _ordered(nodes: Sequence[str], parents: Mapping[str, Sequence[str]]) -> tuple[str, ...]:
    graph = _graph(nodes, parents)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        position = {node: index for index, node in enumerate(nodes)}
        return tuple(nx.lexicographical_topological_sort(graph, key=position.__getitem__))
    raise CycleError([(str(u), str(v)) for u, v, *_ in cycle])


@dataclass(slots=True, frozen=True)
class CausalModel:
    """Immutable causal Bayesian network with one mechanism per node."""

    nodes: tuple[str, ...]
    parents: Mapping[str, tuple[str, ...]]
    mechanisms: Mapping[str, MechanismSpec]
    order: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = tuple(str(node) for node in self.nodes)
        if not nodes:
            raise ModelValidationError("model has no nodes", field="nodes")
        if len(set(nodes)) != len(nodes):
            duplicates = sorted({node for node in nodes if nodes.count(node) > 1})
            raise ModelValidationError(
                f"duplicate node ids: {', '.join(duplicates)}", field="nodes"
            )
        known = set(nodes)
        parents = {node: tuple(self.parents.get(node, ())) for node in nodes}
        for extra in set(self.parents) - known:
            raise ModelValidationError(f"parents given for unknown node {extra!r}", field="parents")
        for index, node in enumerate(nodes):
            for parent in parents[node]:
                if parent not in known:
                    raise ModelValidationError(
                        f"unknown parent {parent!r}", field=f"nodes[{index}].parents"
                    )
            if len(set(parents[node])) != len(parents[node]):
                raise ModelValidationError("repeated parent", field=f"nodes[{index}].parents")
        missing = [node for node in nodes if node not in self.mechanisms]
        if missing:
            raise ModelValidationError(f"no mechanism for {', '.join(missing)}", field="mechanisms")

        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "parents", MappingProxyType(parents))
        object.__setattr__(
            self, "mechanisms", MappingProxyType({node: self.mechanisms[node] for node in nodes})
        )
        object.__setattr__(self, "order", _ordered(nodes, parents))
        for index, node in enumerate(nodes):
            self._check_mechanism(index, node)

    def _check_mechanism(self, index: int, node: str) -> None:
        mechanism = self.mechanisms[node]
        parents = self.parents[node]
        where = f"nodes[{index}].mechanism"
        parent_kinds = [self.mechanisms[parent].kind for parent in parents]

        if isinstance(mechanism, LinearGaussian):
            if len(mechanism.coefficients) != len(parents):
                raise ModelValidationError(
                    f"expected {len(parents)} coefficients, got {len(mechanism.coefficients)}",
                    field=f"{where}.coefficients",
                )
            if any(kind not in _REAL_KINDS for kind in parent_kinds):
                raise ModelValidationError(
                    "linear_gaussian parents must be real-valued", field=where
                )
        elif isinstance(mechanism, UniformDigits):
            for parent in parents:
                other = self.mechanisms[parent]
                if not isinstance(other, UniformDigits) or other.digits != mechanism.digits:
                    raise ModelValidationError(
                        "uniform_digits parents must be uniform_digits with the same d", field=where
                    )
        elif isinstance(mechanism, (UniformBits, XorConst)):
            if isinstance(mechanism, XorConst) and not parents:
                raise ModelValidationError("xor_const needs at least one parent", field=where)
            for parent in parents:
                parent_kind = self.mechanisms[parent].kind
                if self.width(parent) != mechanism.bits or parent_kind not in _BIT_KINDS:
                    raise ModelValidationError(
                        f"parent {parent!r} must be a bit string of width {mechanism.bits}",
                        field=f"{where}.constant" if isinstance(mechanism, XorConst) else where,
                    )
        else:
            arity = {
                DeterministicMap.CONSTANT: 0,
                DeterministicMap.IDENTITY: 1,
                DeterministicMap.NEGATE: 1,
            }.get(mechanism.map)
            if arity is not None and len(parents) != arity:
                raise ModelValidationError(
                    f"map {mechanism.map} takes {arity} parent(s), got {len(parents)}", field=where
                )
            if mechanism.map is DeterministicMap.SUM and not parents:
                raise ModelValidationError("map sum needs at least one parent", field=where)
            if any(kind not in _REAL_KINDS for kind in parent_kinds):
                raise ModelValidationError("deterministic parents must be real-valued", field=where)

    def width(self, node: str) -> int | None:
        """Bit width of a bit-string node, ``None`` otherwise."""

        mechanism = self.mechanisms[node]
        if isinstance(mechanism, (UniformBits, XorConst)):
            return mechanism.bits
        return None

    def parent_index(self) -> dict[str, tuple[str, ...]]:
        """Parents of every node listed in topological order."""

        rank = {node: position for position, node in enumerate(self.order)}
        return {
            node: tuple(sorted(self.parents[node], key=rank.__getitem__)) for node in self.nodes
        }

    def graph(self) -> nx.DiGraph:
        """The parent relation as a networkx graph (parent → child edges)."""

        return _graph(self.nodes, self.parents)


def topological_order(model: CausalModel) -> list[str]:
    """Return the nodes so that parents precede children; ties follow declaration order."""

    return list(model.order)


@dataclass(slots=True, frozen=True)
class Observation:
    """One joint outcome, optionally with the noise that produced it."""

    values: Mapping[str, Value]
    noise: Mapping[str, Value | None] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))
        if self.noise is not None:
            object.__setattr__(self, "noise", MappingProxyType(dict(self.noise)))

    def check(self, model: CausalModel) -> None:
        """Ensure every model node has a value of the right type."""

        missing = [node for node in model.order if node not in self.values]
        if missing:
            raise ContractViolation(f"observation has no value for {', '.join(missing)}")
        for node in model.order:
            _check_type(model, node, self.values[node])

    def vector(self, model: CausalModel) -> list[float]:
        """Real values in topological order."""

        return [float(self.values[node]) for node in model.order]


def _check_type(model: CausalModel, node: str, value: Any) -> None:
    kind = model.mechanisms[node].kind
    if kind in _REAL_KINDS:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif kind is MechanismKind.UNIFORM_DIGITS:
        ok = isinstance(value, str)
    else:
        ok = isinstance(value, int) and not isinstance(value, bool)
    if not ok:
        raise ContractViolation(f"value {value!r} does not match the {kind} mechanism of {node!r}")


def _digits(model: CausalModel, node: str) -> int:
    mechanism = model.mechanisms[node]
    assert isinstance(mechanism, UniformDigits)
    return mechanism.digits


def format_digits(value: Decimal, digits: int) -> str:
    """Fixed-point rendering with exactly ``digits`` fractional digits."""

    return f"{value:.{digits}f}"


def render_value(model: CausalModel, node: str, value: Value) -> bytes:
    """Canonical byte rendering of a node value used by the compressors."""

    _check_type(model, node, value)
    kind = model.mechanisms[node].kind
    if kind is MechanismKind.UNIFORM_DIGITS:
        return format_digits(Decimal(str(value)), _digits(model, node)).encode("ascii")
    if kind in _BIT_KINDS:
        width = model.width(node) or 4
        return f"{int(value):0{width // 4}x}".encode("ascii")
    return format(float(value), ".17g").encode("ascii")


def parse_value(model: CausalModel, node: str, text: str) -> Value:
    """Parse a CSV cell into the value type of ``node``."""

    kind = model.mechanisms[node].kind
    raw = text.strip()
    if kind is MechanismKind.UNIFORM_DIGITS:
        digits = _digits(model, node)
        if not re.fullmatch(rf"\d+\.\d{{{digits}}}", raw):
            raise ContractViolation(f"{node}: expected a decimal with {digits} fractional digits")
        return raw
    if kind in _BIT_KINDS:
        width = model.width(node) or 4
        if not re.fullmatch(rf"[0-9a-fA-F]{{{width // 4}}}", raw):
            raise ContractViolation(f"{node}: expected {width // 4} hexadecimal digits")
        return int(raw, 16)
    try:
        number = float(raw)
    except ValueError as exc:
        raise ContractViolation(f"{node}: {raw!r} is not a number") from exc
    if not math.isfinite(number):
        raise ContractViolation(f"{node}: value must be finite")
    return number


def to_decimal(value: Value) -> Decimal:
    """Exact decimal for a digit-string value."""

    try:
        return Decimal(str(value))
    except InvalidOperation as exc:
        raise ContractViolation(f"{value!r} is not a decimal") from exc


def model_context(model: CausalModel, nodes: Iterable[str] | None = None) -> bytes:
    """Serialized mechanism constants of ``nodes`` (all nodes by default)."""

    selected = model.order if nodes is None else tuple(nodes)
    pieces = []
    for node in selected:
        mechanism = model.mechanisms[node]
        if isinstance(mechanism, XorConst):
            pieces.append(f"{mechanism.constant:0{mechanism.bits // 4}x}".encode("ascii"))
    return CONTEXT_JOINER.join(pieces)
