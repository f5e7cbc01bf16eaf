"""Scenario registry, configuration and report files."""

from __future__ import annotations

import time
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any

import numpy as np
import structlog

from ..errors import ContractViolation
from ..utils.csv_tsv import write_records
from ..utils.json_yaml import write_json

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "Scenario",
    "registered_scenarios",
    "run_experiment",
    "run_named",
    "scenario",
    "trial_rng",
    "write_report",
]

logger = structlog.get_logger(__name__)

Record = dict[str, Any]
Runner = Callable[["ExperimentConfig"], list[Record]]
Summarizer = Callable[[Sequence[Mapping[str, Any]], Mapping[str, Any]], tuple[dict[str, Any], bool]]

SEED_MASK = (1 << 64) - 1


@dataclass(slots=True, frozen=True)
class Scenario:
    """A named experiment: trial runner, acceptance rule and parameter defaults."""

    name: str
    description: str
    runner: Runner
    summarize: Summarizer
    defaults: Mapping[str, Any] = field(default_factory=dict)


_REGISTRY: dict[str, Scenario] = {}


def scenario(
    name: str,
    description: str,
    *,
    summarize: Summarizer,
    defaults: Mapping[str, Any] | None = None,
) -> Callable[[Runner], Runner]:
    """Register the decorated trial runner under ``name``."""

    def decorator(runner: Runner) -> Runner:
        if name in _REGISTRY:
            raise ContractViolation(f"scenario {name!r} is already registered")
        _REGISTRY[name] = Scenario(
            name=name,
            description=description,
            runner=runner,
            summarize=summarize,
            defaults=MappingProxyType(dict(defaults or {})),
        )
        return runner

    return decorator


def registered_scenarios() -> dict[str, Scenario]:
    """Registered scenarios by name, in registration order."""

    return dict(_REGISTRY)


@dataclass(slots=True, frozen=True)
class ExperimentConfig:
    """Scenario name, seed, trial count and scenario parameters."""

    name: str
    seed: int = 0
    trials: int = 1
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.name not in _REGISTRY:
            known = ", ".join(_REGISTRY)
            raise ContractViolation(f"unknown scenario {self.name!r}; registered: {known}")
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ContractViolation("trials must be a positive integer")
        if not 0 <= int(self.seed) <= SEED_MASK:
            raise ContractViolation("seed must be an unsigned 64-bit integer")
        defaults = _REGISTRY[self.name].defaults
        unknown = sorted(set(self.params) - set(defaults))
        if unknown:
            raise ContractViolation(
                f"unknown parameter(s) for {self.name}: {', '.join(unknown)}; "
                f"accepted: {', '.join(defaults) or 'none'}"
            )
        object.__setattr__(self, "params", MappingProxyType({**defaults, **self.params}))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "seed": int(self.seed),
            "trials": int(self.trials),
            "params": dict(self.params),
        }


def trial_rng(config: ExperimentConfig, trial: int) -> np.random.Generator:
    """Generator for one trial: ``default_rng(seed ⊕ trial)``."""

    return np.random.default_rng((int(config.seed) ^ int(trial)) & SEED_MASK)


@dataclass(slots=True, frozen=True)
class ExperimentReport:
    """Per-trial records plus the summary and verdict of the acceptance rule."""

    name: str
    config: ExperimentConfig
    records: tuple[Mapping[str, Any], ...]
    summary: Mapping[str, Any]
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "config": self.config.to_dict(),
            "summary": dict(self.summary),
            "pass": self.passed,
            "records": [dict(record) for record in self.records],
        }


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run every trial of a scenario and apply its acceptance rule."""

    spec = _REGISTRY[config.name]
    started = time.perf_counter()
    records = spec.runner(config)
    summary, passed = spec.summarize(records, config.params)
    logger.info(
        "experiment_finished",
        name=config.name,
        seed=config.seed,
        records=len(records),
        passed=passed,
        elapsed=round(time.perf_counter() - started, 3),
    )
    return ExperimentReport(
        name=config.name,
        config=config,
        records=tuple(records),
        summary=summary,
        passed=bool(passed),
    )


def write_report(report: ExperimentReport, out: str | Path) -> tuple[Path, Path]:
    """Write ``<out>.json`` (full report) and ``<out>.csv`` (per-trial records)."""

    base = Path(out)
    if base.suffix.lower() in {".json", ".csv"}:
        base = base.with_suffix("")
    json_path = write_json(base.parent / f"{base.name}.json", report.to_dict())
    csv_path = write_records(base.parent / f"{base.name}.csv", report.records)
    return json_path, csv_path


def run_named(name: str, config: ExperimentConfig | None = None) -> ExperimentReport:
    """Run scenario ``name`` with ``config``, or with its defaults when omitted."""

    if config is None:
        config = ExperimentConfig(name=name)
    elif config.name != name:
        raise ContractViolation(f"config is for scenario {config.name!r}, not {name!r}")
    return run_experiment(config)
