from pathlib import Path

import pytest

from src.core.causal import (
    LinearGaussian,
    load_model,
    model_from_mapping,
    model_to_mapping,
    parse_model_text,
    three_node_model,
)
from src.core.errors import CycleError, ModelValidationError

MODELS = Path(__file__).resolve().parents[3] / "assets" / "models"

CHAIN_JSON = """
{"nodes": [
  {"id": "X1", "parents": [], "mechanism": {"kind": "uniform_digits", "params": {"d": 10}}},
  {"id": "X2", "parents": ["X1"], "mechanism": {"kind": "uniform_digits", "params": {"d": 10}}}
]}
"""

THREE_NODE_YAML = """
nodes:
  - id: X3
    parents: [X1, X2]
    mechanism: {kind: linear_gaussian, params: {coefficients: [1.0, -1.0], noise_sd: 1.0}}
  - id: X1
    mechanism: {kind: linear_gaussian, params: {noise_sd: 1.0}}
  - id: X2
    parents: [X1]
    mechanism: {kind: linear_gaussian, params: {coefficients: {X1: 2.0}, noise_sd: 1.0}}
"""


def node(node_id, kind, params, parents=()):
    return {"id": node_id, "parents": list(parents), "mechanism": {"kind": kind, "params": params}}


def test_parse_json_model():
    model = parse_model_text(CHAIN_JSON)
    assert model.order == ("X1", "X2")
    assert model.parents["X2"] == ("X1",)


def test_parse_yaml_model_in_any_declaration_order():
    model = parse_model_text(THREE_NODE_YAML, fmt="yaml")
    assert model.order == ("X1", "X2", "X3")
    assert model.mechanisms["X2"] == LinearGaussian(coefficients=(2.0,), noise_sd=1.0)


def test_coefficient_mapping_must_name_parents():
    document = {
        "nodes": [
            node("A", "linear_gaussian", {"noise_sd": 1.0}),
            node("B", "linear_gaussian", {"coefficients": {"Z": 1.0}, "noise_sd": 1.0}, ["A"]),
        ]
    }
    with pytest.raises(ModelValidationError) as excinfo:
        model_from_mapping(document)
    assert excinfo.value.field == "nodes[1].mechanism.params.coefficients"


@pytest.mark.parametrize(
    "params, field",
    [
        ({"d": 0}, "nodes[0].mechanism.params.d"),
        ({"d": 3, "base": 10}, "nodes[0].mechanism.params.base"),
        ({}, "nodes[0].mechanism.params.d"),
    ],
)
def test_schema_errors_carry_field_paths(params, field):
    with pytest.raises(ModelValidationError) as excinfo:
        model_from_mapping({"nodes": [node("A", "uniform_digits", params)]})
    assert excinfo.value.field == field


def test_unknown_mechanism_kind_is_rejected():
    with pytest.raises(ModelValidationError):
        model_from_mapping({"nodes": [node("A", "poisson", {"rate": 1.0})]})


def test_cyclic_document_is_rejected():
    document = {
        "nodes": [
            node("A", "linear_gaussian", {"coefficients": [1.0], "noise_sd": 1.0}, ["B"]),
            node("B", "linear_gaussian", {"coefficients": [1.0], "noise_sd": 1.0}, ["A"]),
        ]
    }
    with pytest.raises(CycleError):
        model_from_mapping(document)


def test_invalid_text_is_a_validation_error():
    with pytest.raises(ModelValidationError):
        parse_model_text("{not json", fmt="json")
    with pytest.raises(ModelValidationError):
        parse_model_text("nodes: [", fmt="yaml")


def test_mapping_round_trip():
    model = three_node_model()
    assert model_to_mapping(model_from_mapping(model_to_mapping(model))) == model_to_mapping(model)


@pytest.mark.parametrize(
    "name, order",
    [
        ("chain.json", ("X1", "X2", "X3", "X4")),
        ("three_node.yaml", ("X1", "X2", "X3")),
        ("xor_pair.json", ("X", "Y")),
        ("gaussian_sum.yaml", ("A", "B", "S")),
    ],
)
def test_bundled_models_load(name, order):
    assert load_model(MODELS / name).order == order


def test_bundled_three_node_matches_library():
    loaded = load_model(MODELS / "three_node.yaml")
    assert model_to_mapping(loaded) == model_to_mapping(three_node_model())


def test_missing_file_is_a_validation_error(tmp_path):
    with pytest.raises(ModelValidationError):
        load_model(tmp_path / "absent.json")
