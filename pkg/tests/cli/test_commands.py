import pytest

from src.cli import handlers
from src.cli.commands import COMMAND_SPECS, build_parser, command_names
from src.core.errors import UsageError


def test_command_catalogue():
    assert command_names() == ("simulate", "score", "attribute", "experiment", "calibrate")
    for spec in COMMAND_SPECS:
        assert spec.description
        assert callable(spec.handler)


def test_subcommands_dispatch_to_handlers():
    args = build_parser().parse_args(["score", "--mode", "gaussian", "--z", "5"])
    assert args.handler is handlers.cmd_score
    assert args.z == 5.0
    assert args.ctx == ""


def test_experiment_params_accumulate():
    args = build_parser().parse_args(
        ["experiment", "--name", "chain", "--param", "d=6", "--param", "n=3"]
    )
    assert args.param == ["d=6", "n=3"]
    assert args.trials == 1
    assert args.seed == 0


def test_seed_accepts_hex_and_full_range():
    argv = ["simulate", "--model", "m.json", "--seed", "0xffffffffffffffff"]
    args = build_parser().parse_args(argv)
    assert args.seed == 2**64 - 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["unknown"],
        ["simulate"],
        ["simulate", "--model", "m.json", "--seed", "-1"],
        ["simulate", "--model", "m.json", "--count", "0"],
        ["score", "--mode", "bogus"],
        ["calibrate"],
        ["calibrate", "--p-value", "0.1", "--integral"],
        ["attribute", "--model", "m.json", "--data", "d.csv", "--compressor", "gzip"],
    ],
)
def test_parse_errors_raise_usage_error(argv, capsys):
    with pytest.raises(UsageError):
        build_parser().parse_args(argv)
    assert "usage:" in capsys.readouterr().err
