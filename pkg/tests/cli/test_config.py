import logging
from pathlib import Path

import pytest

from src.cli.config import OutputConfig, load_settings
from src.core.errors import UsageError
from src.core.lzc import CompressorId


def test_defaults():
    config = load_settings()
    assert config.logging.level == logging.WARNING
    assert config.compressor is CompressorId.LZ77
    assert config.scoring.precision == 6
    assert config.output.directory is None


def test_none_values_fall_back_to_defaults():
    config = load_settings(log_level=None, precision=None, output_dir=None)
    assert config.scoring.precision == 6


def test_log_level_names_are_normalized():
    assert load_settings(log_level=" debug ").logging.level == logging.DEBUG
    assert load_settings(log_level=logging.ERROR).logging.level == logging.ERROR


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("PRECISION", "2")
    config = load_settings()
    assert config.logging.level == logging.WARNING
    assert config.scoring.precision == 6


@pytest.mark.parametrize(
    "values",
    [{"log_level": "chatty"}, {"precision": 18}, {"precision": -1}, {"compressor": "gzip"}],
)
def test_invalid_values_are_usage_errors(values):
    with pytest.raises(UsageError):
        load_settings(**values)


def test_output_directory_resolution(tmp_path):
    config = load_settings(output_dir=str(tmp_path))
    assert config.output.resolve("report") == tmp_path / "report"
    absolute = tmp_path / "elsewhere" / "r.json"
    assert config.output.resolve(absolute) == absolute
    assert OutputConfig(directory=None).resolve("r.json") == Path("r.json")


def test_format_bits_uses_precision():
    assert load_settings().format_bits(13.3898319) == "13.389832"
    assert load_settings(precision=2).format_bits(1.0 / 3.0) == "0.33"
