import pytest

from src.core.causal import (
    Observation,
    digit_chain,
    load_model,
    observations_from_csv,
    observations_to_csv,
    sample,
    three_node_model,
    xor_pair,
)
from src.core.errors import InputDataError

from .test_documents import MODELS

DATA = MODELS.parent / "data"


def test_digit_strings_are_written_verbatim():
    model = digit_chain(2, 10)
    text = observations_to_csv(
        model, [Observation(values={"X1": "0.1000000000", "X2": "1.1000000000"})]
    )
    assert text == '"X1","X2"\n"0.1000000000","1.1000000000"\n'


def test_bits_are_written_as_hex():
    text = observations_to_csv(xor_pair(0xA5, 8), [Observation(values={"X": 0x0F, "Y": 0xAA})])
    assert text.splitlines()[1] == '"0f","aa"'


@pytest.mark.parametrize("model", [digit_chain(), three_node_model(), xor_pair(0xA5, 8)])
def test_written_observations_read_back(model):
    observations = sample(model, 4, 10)
    parsed = observations_from_csv(model, observations_to_csv(model, observations))
    assert [dict(obs.values) for obs in parsed] == [dict(obs.values) for obs in observations]


def test_columns_are_matched_by_name():
    model = digit_chain(2, 3)
    parsed = observations_from_csv(model, "X2,X1\n0.700,0.200\n")
    assert dict(parsed[0].values) == {"X1": "0.200", "X2": "0.700"}


def test_bundled_data_file_parses():
    model = load_model(MODELS / "chain.json")
    text = (DATA / "chain_anomaly.csv").read_text(encoding="utf-8")
    (row,) = observations_from_csv(model, text)
    assert row.values["X2"] == "0.6234567890"


def test_column_mismatch_lists_missing_and_extra():
    with pytest.raises(InputDataError) as excinfo:
        observations_from_csv(digit_chain(2, 3), "X1,X3\n0.100,0.200\n")
    assert excinfo.value.missing == ("X2",)
    assert excinfo.value.extra == ("X3",)


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("X1,X2\n", "no observations"),
        ("X1,X2\n0.100\n", "row 1"),
        ("X1,X2\n0.100,0.2\n", "row 1"),
    ],
)
def test_malformed_data_is_rejected(text, message):
    with pytest.raises(InputDataError, match=message):
        observations_from_csv(digit_chain(2, 3), text)
