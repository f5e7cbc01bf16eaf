"""Seeded, report-emitting experiment scenarios.

Importing the package registers every scenario.
"""

from . import calibration, linear_algebra, root_cause  # noqa: F401
from .base import (
    ExperimentConfig,
    ExperimentReport,
    Scenario,
    registered_scenarios,
    run_experiment,
    run_named,
    scenario,
    trial_rng,
    write_report,
)
from .calibration import run_joint_calibration, run_lemma1_mc, run_soundness
from .linear_algebra import run_maha_decomposition, run_maha_monotonicity
from .root_cause import run_chain_experiment, run_three_node_demo, run_xor_demo

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "Scenario",
    "registered_scenarios",
    "run_chain_experiment",
    "run_experiment",
    "run_joint_calibration",
    "run_lemma1_mc",
    "run_named",
    "run_maha_decomposition",
    "run_maha_monotonicity",
    "run_soundness",
    "run_three_node_demo",
    "run_xor_demo",
    "scenario",
    "trial_rng",
    "write_report",
]
