import pytest

from src.core.experiments import (
    ExperimentConfig,
    run_chain_experiment,
    run_joint_calibration,
    run_lemma1_mc,
    run_maha_decomposition,
    run_maha_monotonicity,
    run_soundness,
    run_three_node_demo,
    run_xor_demo,
)


def test_chain_runs_are_reproducible():
    config = ExperimentConfig(name="chain", seed=5, trials=4, params={"d": 6})
    first = run_chain_experiment(config)
    second = run_chain_experiment(config)
    assert first.records == second.records
    assert first.summary["trials"] == 4
    assert first.summary["min_success_rate"] is None
    assert first.passed
    for record in first.records:
        assert record["correct"] == (record["root_cause"] == record["injected_node"])
        assert 0 <= record["digit"] <= 9


def test_chain_threshold_can_be_set_explicitly():
    config = ExperimentConfig(name="chain", trials=2, params={"d": 4, "min_success_rate": 1.5})
    report = run_chain_experiment(config)
    assert report.summary["min_success_rate"] == 1.5
    assert not report.passed


def test_three_node_demo_defaults():
    report = run_three_node_demo()
    assert report.passed
    assert report.summary["variances_match"]
    by_noise = {record["n2"]: record for record in report.records}
    assert by_noise[5.0]["z2_marginal_x2"] == pytest.approx(5.0, rel=1e-9)
    assert by_noise[5.0]["z2_marginal_x3"] == pytest.approx(25.0 / 3.0, rel=1e-9)
    assert by_noise[5.0]["z2_conditional_x2"] == pytest.approx(25.0, rel=1e-9)
    assert all(by_noise[n2]["root_cause"] == "X2" for n2 in (5.0, 8.0, 12.0))


def test_xor_demo_gap_grows_with_width():
    config = ExperimentConfig(name="xor", seed=3, params={"d_values": [64, 128, 256]})
    report = run_xor_demo(config)
    assert report.passed
    assert report.summary["max_y_given_x_bits"] == 0.0
    assert report.summary["min_slope"] > 0.0


def test_lemma1_small_sample():
    config = ExperimentConfig(name="lemma1", seed=1, params={"samples": 200_000})
    report = run_lemma1_mc(config)
    assert report.passed
    assert {(record["c"], record["t"]) for record in report.records} == {
        (1.0, 2.0),
        (1.0, 4.0),
        (2.0, 3.0),
        (2.0, 5.0),
        (4.0, 5.0),
        (4.0, 7.0),
    }


def test_joint_calibration_small_sample():
    config = ExperimentConfig(
        name="joint_calibration", seed=2, params={"samples": 100_000, "n_values": [2, 4]}
    )
    report = run_joint_calibration(config)
    assert report.passed
    assert len(report.records) == 6


def test_soundness_small_sample():
    config = ExperimentConfig(name="soundness", seed=4, params={"samples": 100_000})
    report = run_soundness(config)
    assert report.passed
    assert report.summary["calibrator_integral"] == pytest.approx(1.0, abs=1e-6)
    tests = {record["test"] for record in report.records}
    assert {"ramdas_calibrated", "likelihood_ratio", "binary_word_exact"} <= tests


def test_maha_monotonicity_small_sweep():
    config = ExperimentConfig(name="maha_monotonicity", params={"instances": 50})
    report = run_maha_monotonicity(config)
    assert report.passed
    assert report.summary["instances"] == 250
    assert report.summary["max_identity_error"] <= 1e-6


def test_maha_decomposition_small_sweep():
    config = ExperimentConfig(name="maha_decomposition", seed=9, params={"instances": 300})
    report = run_maha_decomposition(config)
    assert report.passed
    assert max(record["dim"] for record in report.records) <= 12


@pytest.mark.slow
def test_chain_success_rate_at_ten_digits():
    report = run_chain_experiment(ExperimentConfig(name="chain", seed=0, trials=200))
    assert report.summary["min_success_rate"] == 0.95
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize(
    "runner",
    [
        run_xor_demo,
        run_lemma1_mc,
        run_joint_calibration,
        run_soundness,
        run_maha_monotonicity,
        run_maha_decomposition,
    ],
)
def test_full_scenarios_pass_with_defaults(runner):
    assert runner().passed
