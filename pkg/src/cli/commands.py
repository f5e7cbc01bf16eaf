"""Subcommand catalogue and argument parser construction."""

from __future__ import annotations

import argparse
from collections.abc import Callable, Sequence
from dataclasses import dataclass
import sys
from typing import NoReturn

from ..core.errors import UsageError
from ..core.lzc import CompressorId
from ..core.stat_tests import Form, Kind
from . import handlers
from .config import AppConfig

SCORE_MODES = ("it", "gaussian", "binary", "deficiency", "ncd")


class CliArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as :class:`UsageError`."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _compressor_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--compressor",
        choices=[item.value for item in CompressorId],
        default=None,
        help="compressor grammar (default: lz77)",
    )


def _configure_simulate(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="model file (JSON or YAML)")
    parser.add_argument("--seed", type=_u64, default=0)
    parser.add_argument("--count", type=_positive_int, default=1)
    parser.add_argument("--out", help="CSV destination (default: standard output)")


def _configure_attribute(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="model file (JSON or YAML)")
    parser.add_argument("--data", required=True, help="observation CSV")
    _compressor_option(parser)
    parser.add_argument("--seed", type=_u64, default=0, help="seed recorded in the reports")
    parser.add_argument("--out", help="JSON destination for the attribution reports")


def _configure_experiment(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--name", required=True, help="registered scenario name")
    parser.add_argument("--seed", type=_u64, default=0)
    parser.add_argument("--trials", type=_positive_int, default=1)
    parser.add_argument("--out", help="report base path; writes <out>.json and <out>.csv")
    parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="scenario parameter override, value read as a YAML scalar",
    )


def _configure_score(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", required=True, choices=SCORE_MODES)
    it = parser.add_argument_group("it mode")
    it.add_argument("--tau", type=float)
    it.add_argument("--uniform01", action="store_true", help="reference distribution U(0, 1)")
    it.add_argument("--gaussian", action="store_true", help="reference distribution N(0, 1)")
    it.add_argument("--samples", help="comma separated reference samples")
    it.add_argument("--two-sided", action="store_true")
    gaussian = parser.add_argument_group("gaussian mode")
    gaussian.add_argument("--z", type=float)
    binary = parser.add_argument_group("binary mode")
    binary.add_argument("--m", type=int)
    binary.add_argument("--l", type=int)
    binary.add_argument("--p", type=float)
    binary.add_argument("--kl", action="store_true", help="use the m·D(l/m ‖ p) form")
    deficiency = parser.add_argument_group("deficiency mode")
    deficiency.add_argument("--nlp", type=float, help="−log2 P(x | ctx) in bits")
    deficiency.add_argument("--x")
    deficiency.add_argument("--ctx", default="")
    ncd = parser.add_argument_group("ncd mode")
    ncd.add_argument("--a")
    ncd.add_argument("--b")
    _compressor_option(parser)


def _configure_calibrate(parser: argparse.ArgumentParser) -> None:
    actions = parser.add_mutually_exclusive_group(required=True)
    actions.add_argument("--p-value", type=float, help="print the Ramdas-calibrated e-value")
    actions.add_argument("--integral", action="store_true", help="print the calibrator quadrature")
    actions.add_argument("--to-form", choices=[item.value for item in Form])
    parser.add_argument("--value", type=float)
    parser.add_argument("--from-form", choices=[item.value for item in Form])
    parser.add_argument("--kind", choices=[item.value for item in Kind], default=Kind.P_TEST.value)


Handler = Callable[[argparse.Namespace, AppConfig], int]


@dataclass(frozen=True, slots=True)
class CommandSpec:
    """Metadata describing a subcommand exposed by the command line."""

    name: str
    description: str
    configure: Callable[[argparse.ArgumentParser], None]
    handler: Handler


COMMAND_SPECS: tuple[CommandSpec, ...] = (
    CommandSpec(
        "simulate",
        "Sample observations from a model file",
        _configure_simulate,
        handlers.cmd_simulate,
    ),
    CommandSpec("score", "Print a single score in bits", _configure_score, handlers.cmd_score),
    CommandSpec(
        "attribute",
        "Attribute each data row to a root-cause mechanism",
        _configure_attribute,
        handlers.cmd_attribute,
    ),
    CommandSpec(
        "experiment",
        "Run a registered scenario and write its report",
        _configure_experiment,
        handlers.cmd_experiment,
    ),
    CommandSpec(
        "calibrate",
        "Calibrate p-values and convert test forms",
        _configure_calibrate,
        handlers.cmd_calibrate,
    ),
)


def command_names() -> tuple[str, ...]:
    return tuple(spec.name for spec in COMMAND_SPECS)


def build_parser(specs: Sequence[CommandSpec] = COMMAND_SPECS) -> CliArgumentParser:
    """Return the top-level parser with one subparser per catalogue entry."""

    parser = CliArgumentParser(
        prog="causal-deficiency",
        description="Randomness-deficiency scores and root-cause attribution for causal models.",
    )
    parser.add_argument("--log-level", default=None, help="logging level (default: WARNING)")
    parser.add_argument("--output-dir", default=None, help="directory for relative output paths")
    parser.add_argument("--precision", type=int, default=None, help="decimals in printed scores")
    subparsers = parser.add_subparsers(
        dest="command", metavar="COMMAND", parser_class=CliArgumentParser
    )
    subparsers.required = True
    for spec in specs:
        sub = subparsers.add_parser(spec.name, help=spec.description, description=spec.description)
        spec.configure(sub)
        sub.set_defaults(handler=spec.handler)
    return parser


__all__ = [
    "COMMAND_SPECS",
    "CliArgumentParser",
    "CommandSpec",
    "SCORE_MODES",
    "build_parser",
    "command_names",
]
