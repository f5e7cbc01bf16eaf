"""Model documents: JSON/YAML files validated with pydantic.

Schema::

    {"nodes": [{"id": "X1", "parents": [], "mechanism": {"kind": "...", "params": {...}}}]}

``kind`` selects the params model: ``linear_gaussian`` (``coefficients`` as a
list aligned with ``parents`` or a mapping parent → coefficient,
``noise_sd``), ``uniform_digits`` (``d``), ``uniform_bits`` (``d``),
``xor_const`` (hexadecimal ``constant``) and ``deterministic`` (``map`` and
optional ``value``).
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Annotated, Any, Literal

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import ModelValidationError
from ..utils.json_yaml import JsonValidationError, YamlValidationError, parse_json, parse_yaml
from .model import (
    CausalModel,
    Deterministic,
    DeterministicMap,
    LinearGaussian,
    MechanismSpec,
    UniformBits,
    UniformDigits,
    XorConst,
)

__all__ = [
    "ModelDocument",
    "NodeDocument",
    "load_model",
    "model_from_mapping",
    "model_to_mapping",
    "parse_model_text",
]

logger = structlog.get_logger(__name__)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LinearGaussianParams(_Strict):
    coefficients: list[float] | dict[str, float] = Field(default_factory=list)
    noise_sd: float = Field(gt=0)


class UniformDigitsParams(_Strict):
    d: int = Field(ge=1)


class UniformBitsParams(_Strict):
    d: int = Field(ge=4, multiple_of=4)


class XorConstParams(_Strict):
    constant: str = Field(pattern=r"^[0-9a-fA-F]+$")


class DeterministicParams(_Strict):
    map: DeterministicMap
    value: float | None = None


class LinearGaussianDocument(_Strict):
    kind: Literal["linear_gaussian"]
    params: LinearGaussianParams


class UniformDigitsDocument(_Strict):
    kind: Literal["uniform_digits"]
    params: UniformDigitsParams


class UniformBitsDocument(_Strict):
    kind: Literal["uniform_bits"]
    params: UniformBitsParams


class XorConstDocument(_Strict):
    kind: Literal["xor_const"]
    params: XorConstParams


class DeterministicDocument(_Strict):
    kind: Literal["deterministic"]
    params: DeterministicParams


MechanismDocument = Annotated[
    LinearGaussianDocument
    | UniformDigitsDocument
    | UniformBitsDocument
    | XorConstDocument
    | DeterministicDocument,
    Field(discriminator="kind"),
]


class NodeDocument(_Strict):
    """One node entry of a model file."""

    id: str = Field(min_length=1)
    parents: list[str] = Field(default_factory=list)
    mechanism: MechanismDocument

    def to_mechanism(self) -> MechanismSpec:
        params = self.mechanism.params
        if isinstance(params, LinearGaussianParams):
            coefficients = params.coefficients
            if isinstance(coefficients, dict):
                unknown = sorted(set(coefficients) - set(self.parents))
                if unknown:
                    raise ModelValidationError(
                        f"coefficients for non-parents: {', '.join(unknown)}", field="coefficients"
                    )
                coefficients = [coefficients.get(parent, 0.0) for parent in self.parents]
            return LinearGaussian(coefficients=tuple(coefficients), noise_sd=params.noise_sd)
        if isinstance(params, UniformDigitsParams):
            return UniformDigits(digits=params.d)
        if isinstance(params, UniformBitsParams):
            return UniformBits(bits=params.d)
        if isinstance(params, XorConstParams):
            return XorConst.from_hex(params.constant)
        return Deterministic(map=params.map, value=params.value)


class ModelDocument(_Strict):
    """Top-level model file."""

    nodes: list[NodeDocument] = Field(min_length=1)
    description: str | None = None

    def to_model(self) -> CausalModel:
        mechanisms: dict[str, MechanismSpec] = {}
        for index, node in enumerate(self.nodes):
            try:
                mechanisms[node.id] = node.to_mechanism()
            except ModelValidationError as exc:
                raise ModelValidationError(
                    exc.detail, field=f"nodes[{index}].mechanism.params.{exc.field}"
                ) from exc
        return CausalModel(
            nodes=tuple(node.id for node in self.nodes),
            parents={node.id: tuple(node.parents) for node in self.nodes},
            mechanisms=mechanisms,
        )


_UNION_TAGS = frozenset(
    {"linear_gaussian", "uniform_digits", "uniform_bits", "xor_const", "deterministic"}
)


def _format_location(location: Sequence[Any]) -> str:
    path = ""
    for part in location:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "$"


def model_from_mapping(data: Any) -> CausalModel:
    """Validate a parsed document and build the model."""

    try:
        document = ModelDocument.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = [part for part in error["loc"] if part not in _UNION_TAGS]
        raise ModelValidationError(error["msg"], field=_format_location(location)) from exc
    return document.to_model()


def parse_model_text(text: str, *, fmt: Literal["json", "yaml"] | None = None) -> CausalModel:
    """Parse JSON or YAML model text; without ``fmt`` JSON is tried first."""

    if fmt != "yaml":
        try:
            return model_from_mapping(parse_json(text))
        except JsonValidationError as exc:
            if fmt == "json":
                raise ModelValidationError(f"invalid JSON: {exc}", field="$") from exc
    try:
        data = parse_yaml(text)
    except YamlValidationError as exc:
        raise ModelValidationError(f"invalid YAML: {exc}", field="$") from exc
    return model_from_mapping(data)


def load_model(path: str | Path) -> CausalModel:
    """Load a model file; ``.yaml``/``.yml`` files are read as YAML."""

    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelValidationError(f"cannot read {source}: {exc.strerror}", field="$") from exc
    fmt = "yaml" if source.suffix.lower() in {".yaml", ".yml"} else "json"
    model = parse_model_text(text, fmt=fmt)
    logger.info("model_loaded", path=str(source), nodes=len(model.nodes))
    return model


def model_to_mapping(model: CausalModel) -> dict[str, Any]:
    """Serialize ``model`` back to the document schema."""

    nodes: list[dict[str, Any]] = []
    for node in model.nodes:
        mechanism = model.mechanisms[node]
        params: dict[str, Any]
        if isinstance(mechanism, LinearGaussian):
            params = {"coefficients": list(mechanism.coefficients), "noise_sd": mechanism.noise_sd}
        elif isinstance(mechanism, UniformDigits):
            params = {"d": mechanism.digits}
        elif isinstance(mechanism, UniformBits):
            params = {"d": mechanism.bits}
        elif isinstance(mechanism, XorConst):
            params = {"constant": f"{mechanism.constant:0{mechanism.bits // 4}x}"}
        else:
            params = {"map": str(mechanism.map)}
            if mechanism.value is not None:
                params["value"] = mechanism.value
        nodes.append(
            {
                "id": node,
                "parents": list(model.parents[node]),
                "mechanism": {"kind": str(mechanism.kind), "params": dict(params)},
            }
        )
    return {"nodes": nodes}
