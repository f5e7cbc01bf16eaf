"""Monte Carlo calibration scenarios for IT scores, p-tests and e-tests."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from ..deficiency import binary_word_deficiency_bound
from ..it_scores import joint_convolution_bits
from ..stat_tests import (
    WeightVector,
    calibrator_integral,
    combine_e_values,
    combine_p_values,
    likelihood_ratio_bits,
    probability_values,
    ramdas_calibrator,
)
from .base import ExperimentConfig, ExperimentReport, Record, run_named, scenario, trial_rng

__all__ = [
    "run_joint_calibration",
    "run_lemma1_mc",
    "run_soundness",
    "summarize_joint_calibration",
    "summarize_lemma1",
    "summarize_soundness",
    "two_sided_bits",
]

_SIGMAS = 5.0
_LN2 = math.log(2.0)


def _uniform(rng: np.random.Generator, shape: int | tuple[int, ...]) -> NDArray[np.float64]:
    # (0, 1] so that −log2 stays finite
    return 1.0 - rng.random(shape)


def two_sided_bits(x: NDArray[np.float64], scale: float) -> NDArray[np.float64]:
    """Vectorized two-sided Gaussian IT score ``−log2 min(1, 2·sf(|x|/scale))``."""

    log_p = _LN2 + stats.norm.logsf(np.abs(x) / scale)
    return np.maximum(-log_p / _LN2, 0.0)


def summarize_lemma1(
    records: Sequence[Mapping[str, Any]], params: Mapping[str, Any]
) -> tuple[dict[str, Any], bool]:
    margins = [
        record["bound"] + _SIGMAS * record["stderr"] - record["conditional_tail"]
        for record in records
    ]
    summary = {
        "cases": len(records),
        "min_margin": min(margins, default=0.0),
        "violations": sum(1 for margin in margins if margin < 0.0),
    }
    return summary, bool(records) and summary["violations"] == 0


@scenario(
    "lemma1",
    "P(score(X2) >= t | score(X1) >= c) <= 2^(c - t) for X1 -> X2 linear Gaussian",
    summarize=summarize_lemma1,
    defaults={
        "pairs": [[1, 2], [1, 4], [2, 3], [2, 5], [4, 5], [4, 7]],
        "samples": 1_000_000,
        "coefficient": 1.0,
        "noise_sd": 1.0,
    },
)
def lemma1_trials(config: ExperimentConfig) -> list[Record]:
    params = config.params
    count = int(params["samples"])
    coefficient = float(params["coefficient"])
    noise_sd = float(params["noise_sd"])
    records: list[Record] = []
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        x1 = rng.standard_normal(count)
        x2 = coefficient * x1 + noise_sd * rng.standard_normal(count)
        cause = two_sided_bits(x1, 1.0)
        effect = two_sided_bits(x2, math.hypot(coefficient, noise_sd))
        for c, t in params["pairs"]:
            selected = cause >= c
            conditioned = int(np.count_nonzero(selected))
            tail = float(np.mean(effect[selected] >= t)) if conditioned else 0.0
            stderr = math.sqrt(tail * (1.0 - tail) / conditioned) if conditioned else 0.0
            records.append(
                {
                    "trial": trial,
                    "c": float(c),
                    "t": float(t),
                    "conditioned": conditioned,
                    "conditional_tail": tail,
                    "stderr": stderr,
                    "bound": min(1.0, 2.0 ** (float(c) - float(t))),
                }
            )
    return records


def summarize_joint_calibration(
    records: Sequence[Mapping[str, Any]], params: Mapping[str, Any]
) -> tuple[dict[str, Any], bool]:
    deviations = [
        abs(record["empirical_tail"] - record["nominal_tail"]) / record["stderr"]
        for record in records
    ]
    summary = {"cases": len(records), "max_deviation_stderr": max(deviations, default=0.0)}
    return summary, bool(records) and summary["max_deviation_stderr"] <= _SIGMAS


@scenario(
    "joint_calibration",
    "P(joint score >= c) = 2^-c for independent uniform conditional p-values",
    summarize=summarize_joint_calibration,
    defaults={"n_values": [2, 3, 5], "thresholds": [1, 3, 7], "samples": 1_000_000},
)
def joint_calibration_trials(config: ExperimentConfig) -> list[Record]:
    count = int(config.params["samples"])
    records: list[Record] = []
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        for n in config.params["n_values"]:
            joint = joint_convolution_bits(-np.log2(_uniform(rng, (count, int(n)))))
            for c in config.params["thresholds"]:
                nominal = 2.0 ** -float(c)
                records.append(
                    {
                        "trial": trial,
                        "n": int(n),
                        "c": float(c),
                        "empirical_tail": float(np.mean(joint >= c)),
                        "nominal_tail": nominal,
                        "stderr": math.sqrt(nominal * (1.0 - nominal) / count),
                    }
                )
    return records


def _e_samples(
    rng: np.random.Generator, count: int, word_length: int
) -> dict[str, NDArray[np.float64]]:
    p_values = _uniform(rng, (2, count))
    calibrated = ramdas_calibrator(1.0 / p_values)
    x = rng.standard_normal(count)
    log_q = stats.norm.logpdf(x, loc=1.0) / _LN2
    log_p = stats.norm.logpdf(x) / _LN2
    words = rng.random((count, word_length)) < 0.3
    weights = np.count_nonzero(words, axis=1)
    table = np.array(
        [
            binary_word_deficiency_bound(word_length, weight, 0.3, clamp=False)
            for weight in range(word_length + 1)
        ]
    )
    return {
        "ramdas_calibrated": calibrated[0],
        "combined_e": combine_e_values(calibrated, WeightVector.uniform(2)),
        "likelihood_ratio": np.exp2(likelihood_ratio_bits(log_q, log_p)),
        "binary_word_exact": np.exp2(table[weights]),
    }


def _p_samples(
    rng: np.random.Generator, count: int, reference_size: int
) -> dict[str, NDArray[np.float64]]:
    p_values = _uniform(rng, (2, count))
    x = rng.standard_normal(count)
    draws = rng.standard_normal((min(count, 20_000), reference_size + 1))
    exceed = np.count_nonzero(draws[:, 1:] >= draws[:, :1], axis=1)
    combined_ratio = combine_p_values(1.0 / p_values, WeightVector.uniform(2))
    calibrated = ramdas_calibrator(1.0 / p_values[0])
    return {
        "analytic_one_tailed": stats.norm.sf(x),
        "empirical_add_one": (1.0 + exceed) / (reference_size + 1.0),
        "combined_p": probability_values(combined_ratio),
        "e_to_p": probability_values(calibrated),
    }


def summarize_soundness(
    records: Sequence[Mapping[str, Any]], params: Mapping[str, Any]
) -> tuple[dict[str, Any], bool]:
    failures = [
        record["test"]
        for record in records
        if record["statistic"] > record["limit"] + _SIGMAS * record["stderr"]
    ]
    integral = calibrator_integral()
    summary = {
        "cases": len(records),
        "failures": failures,
        "calibrator_integral": integral,
    }
    return summary, bool(records) and not failures and abs(integral - 1.0) <= 1e-6


@scenario(
    "soundness",
    "Monte Carlo means of e-tests stay below 1 and p-test tails below epsilon",
    summarize=summarize_soundness,
    defaults={
        "samples": 1_000_000,
        "epsilons": [0.5, 0.1, 0.01],
        "word_length": 20,
        "reference_size": 99,
    },
)
def soundness_trials(config: ExperimentConfig) -> list[Record]:
    count = int(config.params["samples"])
    records: list[Record] = []
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        for name, values in _e_samples(rng, count, int(config.params["word_length"])).items():
            finite = values[np.isfinite(values)]
            records.append(
                {
                    "trial": trial,
                    "test": name,
                    "kind": "e-test",
                    "epsilon": 0.0,
                    "statistic": float(np.mean(finite)),
                    "limit": 1.0,
                    "stderr": float(np.std(finite) / math.sqrt(finite.size)),
                }
            )
        for name, values in _p_samples(rng, count, int(config.params["reference_size"])).items():
            for epsilon in config.params["epsilons"]:
                tail = float(np.mean(values <= epsilon))
                records.append(
                    {
                        "trial": trial,
                        "test": name,
                        "kind": "p-test",
                        "epsilon": float(epsilon),
                        "statistic": tail,
                        "limit": float(epsilon),
                        "stderr": math.sqrt(float(epsilon) * (1.0 - float(epsilon)) / values.size),
                    }
                )
    return records


def run_lemma1_mc(config: ExperimentConfig | None = None) -> ExperimentReport:
    return run_named("lemma1", config)


def run_joint_calibration(config: ExperimentConfig | None = None) -> ExperimentReport:
    return run_named("joint_calibration", config)


def run_soundness(config: ExperimentConfig | None = None) -> ExperimentReport:
    return run_named("soundness", config)
