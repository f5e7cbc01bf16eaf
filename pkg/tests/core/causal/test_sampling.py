import math

import numpy as np
import pytest

from src.core.causal import (
    Observation,
    OneDigitNoise,
    SetNoise,
    covariance,
    digit_chain,
    inject_anomaly,
    linear_scm,
    load_model,
    propagate,
    recover_noise,
    sample,
    three_node_model,
    xor_pair,
)
from src.core.errors import ContractViolation, UnsupportedObservation

from .test_documents import MODELS

CHAIN_ROW = {
    "X1": "0.1234567890",
    "X2": "0.6234567890",
    "X3": "1.1234567890",
    "X4": "1.2234567890",
}


def test_propagate_digit_chain_is_exact():
    values = propagate(digit_chain(2, 10), {"X1": "0.1234567890", "X2": "0.5000000000"})
    assert values == {"X1": "0.1234567890", "X2": "0.6234567890"}


def test_propagate_linear_gaussian():
    values = propagate(three_node_model(), {"X1": 1.0, "X2": 0.0, "X3": 0.5})
    assert values == {"X1": 1.0, "X2": 2.0, "X3": -0.5}


def test_propagate_xor():
    assert propagate(xor_pair(0xA5, 8), {"X": 0x3C, "Y": None}) == {"X": 0x3C, "Y": 0x99}


def test_sample_is_reproducible_for_a_seed():
    model = digit_chain()
    first = [dict(obs.values) for obs in sample(model, 11, 5)]
    second = [dict(obs.values) for obs in sample(model, 11, 5)]
    other = [dict(obs.values) for obs in sample(model, 12, 5)]
    assert first == second
    assert first != other


def test_sampled_values_respect_mechanisms():
    model = digit_chain(3, 10)
    for observation in sample(model, 3, 20):
        observation.check(model)
        assert all(len(value.split(".")[1]) == 10 for value in observation.values.values())
        assert recover_noise(model, observation) == dict(observation.noise)


def test_sampled_bits_fit_width():
    for observation in sample(xor_pair(0xA5, 8), 0, 50):
        assert 0 <= observation.values["X"] < 256
        assert observation.values["Y"] == observation.values["X"] ^ 0xA5


def test_sample_rejects_non_positive_count():
    with pytest.raises(ContractViolation):
        sample(digit_chain(), 0, 0)


def test_recover_noise_from_values():
    noise = recover_noise(digit_chain(), Observation(values=CHAIN_ROW))
    assert noise == {
        "X1": "0.1234567890",
        "X2": "0.5000000000",
        "X3": "0.5000000000",
        "X4": "0.1000000000",
    }


def test_recover_noise_linear_and_deterministic():
    model = load_model(MODELS / "gaussian_sum.yaml")
    noise = recover_noise(model, Observation(values={"A": 1.5, "B": -0.5, "S": 1.0}))
    assert noise == {"A": 1.5, "B": -0.5, "S": None}

    observation = Observation(values={"X1": 1.0, "X2": 2.0, "X3": -0.5})
    gaussian = recover_noise(three_node_model(), observation)
    assert gaussian["X2"] == 0.0
    assert math.isclose(gaussian["X3"], 0.5)


def test_recover_noise_rejects_values_outside_support():
    observation = Observation(values={"X1": "0.5000000000", "X2": "0.4000000000"})
    with pytest.raises(UnsupportedObservation):
        recover_noise(digit_chain(2, 10), observation)


def test_inject_anomaly_changes_only_node_and_descendants():
    base = Observation(values=CHAIN_ROW)
    anomalous = inject_anomaly(digit_chain(), base, "X2", OneDigitNoise(9))
    assert anomalous.values == {
        "X1": "0.1234567890",
        "X2": "1.0234567890",
        "X3": "1.5234567890",
        "X4": "1.6234567890",
    }
    assert anomalous.noise["X2"] == "0.9000000000"


def test_inject_anomaly_on_a_leaf_keeps_ancestors():
    base = Observation(values=CHAIN_ROW)
    anomalous = inject_anomaly(digit_chain(), base, "X4", SetNoise("0.75"))
    assert anomalous.values["X3"] == CHAIN_ROW["X3"]
    assert anomalous.values["X4"] == "1.8734567890"


def test_inject_anomaly_from_seed():
    model = digit_chain()
    drawn = sample(model, 3, 1)[0]
    anomalous = inject_anomaly(model, 3, "X1", SetNoise("0.5"))
    assert anomalous.values["X1"] == "0.5000000000"
    assert anomalous.noise["X3"] == drawn.noise["X3"]


@pytest.mark.parametrize(
    "node, spec",
    [
        ("X2", SetNoise("0.12345678901")),
        ("X2", SetNoise("1.5")),
        ("X9", SetNoise("0.5")),
    ],
)
def test_inject_anomaly_rejects_bad_digit_noise(node, spec):
    with pytest.raises(ContractViolation):
        inject_anomaly(digit_chain(), Observation(values=CHAIN_ROW), node, spec)


def test_inject_anomaly_rejects_mismatched_specs():
    with pytest.raises(ContractViolation):
        inject_anomaly(three_node_model(), 0, "X2", OneDigitNoise(3))
    with pytest.raises(ContractViolation):
        inject_anomaly(xor_pair(0xA5, 8), 0, "Y", SetNoise(1))
    with pytest.raises(ContractViolation):
        inject_anomaly(xor_pair(0xA5, 8), 0, "X", SetNoise(256))
    with pytest.raises(ContractViolation):
        OneDigitNoise(10)


def test_sampled_linear_model_matches_its_covariance():
    model = three_node_model()
    observations = sample(model, 21, 20_000)
    draws = np.array([observation.vector(model) for observation in observations])
    np.testing.assert_allclose(draws.mean(axis=0), 0.0, atol=0.1)
    np.testing.assert_allclose(
        np.cov(draws, rowvar=False), covariance(linear_scm(model)), atol=0.25
    )
    noise = np.array(
        [[observation.noise[node] for node in model.order] for observation in observations]
    )
    np.testing.assert_allclose(noise.var(axis=0), 1.0, atol=0.05)


def test_sampled_bit_noise_is_uniform_below_width():
    observations = sample(xor_pair(0xABC, 12), 8, 20_000)
    noise = np.array([observation.noise["X"] for observation in observations])
    assert noise.min() >= 0
    assert noise.max() < 2**12
    assert noise.max() >= 2**11
    assert noise.mean() == pytest.approx((2**12 - 1) / 2, rel=0.03)
    assert all(observation.noise["Y"] is None for observation in observations)


def test_sampled_digit_noise_has_exact_width_and_uniform_digits():
    model = digit_chain(2, 7)
    observations = sample(model, 5, 2_000)
    counts = np.zeros(10)
    for observation in observations:
        for node in model.order:
            whole, fraction = observation.noise[node].split(".")
            assert whole == "0"
            assert len(fraction) == 7
            counts += np.bincount([int(digit) for digit in fraction], minlength=10)
    np.testing.assert_allclose(counts / counts.sum(), 0.1, atol=0.01)
