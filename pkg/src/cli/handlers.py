"""Subcommand handlers.

Every handler receives the parsed namespace plus the application config and
returns a process exit code.  Library errors propagate; ``main`` maps them to
the exit-code contract.
"""

from __future__ import annotations

import argparse
from enum import IntEnum
from pathlib import Path
from typing import TYPE_CHECKING, Any

from scipy import stats
import structlog

from ..core.attribution import attribute_many
from ..core.causal import load_model, observations_from_csv, observations_to_csv, sample
from ..core.deficiency import (
    BinaryBoundMode,
    binary_word_deficiency_bound,
    deficiency_estimate,
    gaussian_deficiency_bound,
)
from ..core.errors import ContractViolation, InputDataError, UsageError
from ..core.experiments import (
    ExperimentConfig,
    registered_scenarios,
    run_experiment,
    write_report,
)
from ..core.it_scores import it_score, two_sided_it_score
from ..core.lzc import CompressorId, ncd
from ..core.stat_tests import (
    Form,
    Kind,
    TestScore,
    calibrator_integral,
    convert_form,
    ramdas_calibrate,
)
from ..core.utils.csv_tsv import ParseResult, read_table
from ..core.utils.json_yaml import parse_scalar, write_json

if TYPE_CHECKING:
    from .config import AppConfig

logger = structlog.get_logger(__name__)


class ExitCode(IntEnum):
    OK = 0
    USAGE = 1
    INPUT_DATA = 2
    ACCEPTANCE_FAILED = 3


# Flags owned by each score mode; flags of other modes are rejected.
_MODE_FLAGS: dict[str, tuple[str, ...]] = {
    "it": ("tau", "uniform01", "gaussian", "samples", "two_sided"),
    "gaussian": ("z",),
    "binary": ("m", "l", "p", "kl"),
    "deficiency": ("nlp", "x", "ctx", "compressor"),
    "ncd": ("a", "b", "compressor"),
}


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def _is_set(value: Any) -> bool:
    return value not in (None, False, "")


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    return path


def _read_data(path: str) -> ParseResult:
    try:
        return read_table(path)
    except OSError as exc:
        raise InputDataError(f"cannot read data file {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputDataError(f"data file {path} is not UTF-8 text") from exc


def _compressor(args: argparse.Namespace, config: AppConfig) -> CompressorId:
    return CompressorId(args.compressor) if args.compressor else config.compressor


def cmd_simulate(args: argparse.Namespace, config: AppConfig) -> int:
    model = load_model(args.model)
    observations = sample(model, args.seed, args.count)
    text = observations_to_csv(model, observations)
    if args.out:
        target = _write_text(config.output.resolve(args.out), text)
        logger.info("simulation_written", path=str(target), rows=len(observations))
    else:
        print(text, end="")
    return ExitCode.OK


def cmd_attribute(args: argparse.Namespace, config: AppConfig) -> int:
    model = load_model(args.model)
    observations = observations_from_csv(model, _read_data(args.data))
    reports = attribute_many(model, observations, _compressor(args, config), args.seed)
    for row, report in enumerate(reports, start=1):
        bits = report.per_node[report.root_cause].bits
        print(f"row {row}: root_cause={report.root_cause} bits={config.format_bits(bits)}")
    if args.out:
        documents = [report.to_dict() for report in reports]
        target = write_json(config.output.resolve(args.out), documents)
        logger.info("attribution_written", path=str(target), rows=len(reports))
    return ExitCode.OK


def _parse_params(items: list[str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        params[key.strip()] = parse_scalar(value)
    return params


def cmd_experiment(args: argparse.Namespace, config: AppConfig) -> int:
    scenarios = registered_scenarios()
    if args.name not in scenarios:
        raise UsageError(f"unknown scenario {args.name!r}; registered: {', '.join(scenarios)}")
    try:
        experiment = ExperimentConfig(
            name=args.name,
            seed=args.seed,
            trials=args.trials,
            params=_parse_params(args.param),
        )
    except ContractViolation as exc:
        raise UsageError(str(exc)) from exc

    report = run_experiment(experiment)
    json_path, csv_path = write_report(report, config.output.resolve(args.out or args.name))
    verdict = "pass" if report.passed else "fail"
    print(f"{report.name}: {verdict} ({json_path}, {csv_path})")
    return ExitCode.OK if report.passed else ExitCode.ACCEPTANCE_FAILED


def _check_mode_flags(args: argparse.Namespace) -> None:
    own = set(_MODE_FLAGS[args.mode])
    foreign = sorted({name for flags in _MODE_FLAGS.values() for name in flags} - own)
    stray = [_flag(name) for name in foreign if _is_set(getattr(args, name))]
    if stray:
        raise UsageError(f"--mode {args.mode} does not accept {', '.join(stray)}")


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [_flag(name) for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"--mode {args.mode} requires {', '.join(missing)}")


def _it_reference(args: argparse.Namespace) -> Any:
    chosen = [name for name in ("uniform01", "gaussian", "samples") if _is_set(getattr(args, name))]
    if len(chosen) != 1:
        raise UsageError("--mode it needs exactly one of --uniform01, --gaussian, --samples")
    if args.uniform01:
        return stats.uniform()
    if args.gaussian:
        return stats.norm()
    try:
        samples = [float(chunk) for chunk in args.samples.split(",") if chunk.strip()]
    except ValueError as exc:
        raise UsageError(f"--samples must be comma separated numbers: {exc}") from exc
    if not samples:
        raise UsageError("--samples must list at least one value")
    return samples


def _score_value(args: argparse.Namespace, config: AppConfig) -> float:
    if args.mode == "it":
        _require(args, "tau")
        reference = _it_reference(args)
        scorer = two_sided_it_score if args.two_sided else it_score
        return scorer(args.tau, reference).bits
    if args.mode == "gaussian":
        _require(args, "z")
        return gaussian_deficiency_bound(args.z)
    if args.mode == "binary":
        _require(args, "m", "l", "p")
        mode = BinaryBoundMode.KL if args.kl else BinaryBoundMode.EXACT
        return binary_word_deficiency_bound(args.m, args.l, args.p, mode)
    if args.mode == "deficiency":
        _require(args, "nlp", "x")
        return deficiency_estimate(args.nlp, args.x, args.ctx, _compressor(args, config)).bits
    _require(args, "a", "b")
    return ncd(args.a, args.b, _compressor(args, config))


def cmd_score(args: argparse.Namespace, config: AppConfig) -> int:
    _check_mode_flags(args)
    print(config.format_bits(_score_value(args, config)))
    return ExitCode.OK


def cmd_calibrate(args: argparse.Namespace, config: AppConfig) -> int:
    if args.to_form is None and (args.value is not None or args.from_form is not None):
        raise UsageError("--value and --from-form are only used with --to-form")
    if args.p_value is not None:
        score = TestScore(value=args.p_value, kind=Kind.P_TEST, form=Form.PROBABILITY)
        value = ramdas_calibrate(score).value
    elif args.integral:
        value = calibrator_integral()
    else:
        if args.value is None or args.from_form is None:
            raise UsageError("--to-form requires --value and --from-form")
        score = TestScore(value=args.value, kind=Kind(args.kind), form=Form(args.from_form))
        value = convert_form(score, Form(args.to_form)).value
    print(config.format_bits(value))
    return ExitCode.OK


__all__ = [
    "ExitCode",
    "cmd_attribute",
    "cmd_calibrate",
    "cmd_experiment",
    "cmd_score",
    "cmd_simulate",
]
