"""Random-instance sweeps over Mahalanobis distances."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np

from ..causal import (
    covariance,
    mahalanobis_sq,
    marginal_mahalanobis_sq,
    min_eigenvalue,
    noise_score_decomposition,
    random_covariance,
    random_linear_scm,
    sample_matrix,
    schur_correction,
)
from .base import ExperimentConfig, ExperimentReport, Record, run_named, scenario, trial_rng

__all__ = [
    "run_maha_decomposition",
    "run_maha_monotonicity",
    "summarize_maha_decomposition",
    "summarize_maha_monotonicity",
]

_TOLERANCE = 1e-9


def summarize_maha_monotonicity(
    records: Sequence[Mapping[str, Any]], params: Mapping[str, Any]
) -> tuple[dict[str, Any], bool]:
    max_violation = max((record["relative_violation"] for record in records), default=0.0)
    lowest = min((record["min_eigenvalue"] for record in records), default=0.0)
    identity_error = max((record["identity_error"] for record in records), default=0.0)
    summary = {
        "instances": len(records),
        "max_relative_violation": max_violation,
        "min_correction_eigenvalue": lowest,
        "max_identity_error": identity_error,
    }
    passed = bool(records) and max_violation <= _TOLERANCE and lowest >= -_TOLERANCE
    return summary, passed


@scenario(
    "maha_monotonicity",
    "marginal Mahalanobis distance never exceeds the full one",
    summarize=summarize_maha_monotonicity,
    defaults={"dims": [2, 3, 4, 5, 6], "instances": 2000},
)
def maha_monotonicity_trials(config: ExperimentConfig) -> list[Record]:
    records: list[Record] = []
    instances = int(config.params["instances"])
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        for dim in config.params["dims"]:
            dim = int(dim)
            for instance in range(instances):
                sigma = random_covariance(rng, dim)
                x = 2.0 * rng.standard_normal(dim)
                size = int(rng.integers(1, dim + 1))
                subset = sorted(int(index) for index in rng.permutation(dim)[:size])
                full = mahalanobis_sq(x, sigma)
                marginal = marginal_mahalanobis_sq(x, sigma, subset)
                correction = schur_correction(sigma, subset)
                identity_error = abs(float(x @ correction @ x) - (full - marginal)) / (1.0 + full)
                records.append(
                    {
                        "trial": trial,
                        "dim": dim,
                        "instance": instance,
                        "subset_size": size,
                        "full_m2": full,
                        "marginal_m2": marginal,
                        "relative_violation": (marginal - full) / (1.0 + full),
                        "min_eigenvalue": min_eigenvalue(correction),
                        "identity_error": identity_error,
                    }
                )
    return records


def summarize_maha_decomposition(
    records: Sequence[Mapping[str, Any]], params: Mapping[str, Any]
) -> tuple[dict[str, Any], bool]:
    worst = max((record["relative_error"] for record in records), default=0.0)
    summary = {"instances": len(records), "max_relative_error": worst}
    return summary, bool(records) and worst <= _TOLERANCE


@scenario(
    "maha_decomposition",
    "sum of per-mechanism noise z^2 equals the Mahalanobis distance",
    summarize=summarize_maha_decomposition,
    defaults={"max_dim": 12, "instances": 10_000},
)
def maha_decomposition_trials(config: ExperimentConfig) -> list[Record]:
    records: list[Record] = []
    max_dim = int(config.params["max_dim"])
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        for instance in range(int(config.params["instances"])):
            dim = int(rng.integers(1, max_dim + 1))
            scm = random_linear_scm(rng, dim)
            x = sample_matrix(scm, rng, 1)[0] * 2.0
            direct = mahalanobis_sq(x, covariance(scm))
            decomposed = float(np.sum(noise_score_decomposition(x, scm)))
            records.append(
                {
                    "trial": trial,
                    "instance": instance,
                    "dim": dim,
                    "mahalanobis_sq": direct,
                    "noise_score_sum": decomposed,
                    "relative_error": abs(decomposed - direct) / max(abs(direct), 1e-300),
                }
            )
    return records


def run_maha_monotonicity(config: ExperimentConfig | None = None) -> ExperimentReport:
    return run_named("maha_monotonicity", config)


def run_maha_decomposition(config: ExperimentConfig | None = None) -> ExperimentReport:
    return run_named("maha_decomposition", config)
