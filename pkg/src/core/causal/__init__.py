"""Causal models, sampling and linear-Gaussian algebra."""

from .documents import (
    ModelDocument,
    NodeDocument,
    load_model,
    model_from_mapping,
    model_to_mapping,
    parse_model_text,
)
from .library import digit_chain, three_node_model, xor_pair
from .linear import (
    LinearSCM,
    covariance,
    linear_scm,
    mahalanobis_sq,
    marginal_mahalanobis_sq,
    min_eigenvalue,
    noise_score_decomposition,
    random_covariance,
    random_linear_scm,
    sample_matrix,
    schur_correction,
)
from .model import (
    CausalModel,
    Deterministic,
    DeterministicMap,
    LinearGaussian,
    MechanismKind,
    MechanismSpec,
    Observation,
    UniformBits,
    UniformDigits,
    Value,
    XorConst,
    model_context,
    parse_value,
    render_value,
    topological_order,
)
from .sampling import OneDigitNoise, SetNoise, inject_anomaly, propagate, recover_noise, sample
from .tables import observations_from_csv, observations_to_csv

__all__ = [
    "CausalModel",
    "Deterministic",
    "DeterministicMap",
    "LinearGaussian",
    "LinearSCM",
    "MechanismKind",
    "MechanismSpec",
    "ModelDocument",
    "NodeDocument",
    "Observation",
    "OneDigitNoise",
    "SetNoise",
    "UniformBits",
    "UniformDigits",
    "Value",
    "XorConst",
    "covariance",
    "digit_chain",
    "inject_anomaly",
    "linear_scm",
    "load_model",
    "mahalanobis_sq",
    "marginal_mahalanobis_sq",
    "min_eigenvalue",
    "model_context",
    "model_from_mapping",
    "model_to_mapping",
    "noise_score_decomposition",
    "observations_from_csv",
    "observations_to_csv",
    "parse_model_text",
    "parse_value",
    "propagate",
    "random_covariance",
    "random_linear_scm",
    "recover_noise",
    "render_value",
    "sample",
    "sample_matrix",
    "schur_correction",
    "three_node_model",
    "topological_order",
    "xor_pair",
]
