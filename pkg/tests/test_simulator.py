# wvapy simulates weak-value-amplified estimation of optomechanical couplings
# Copyright (C) 2022-2026 The wvapy developers

# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; in version 2
# of the License.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor,
# Boston, MA  02110-1301, USA.
# Core Library
import logging
import math

# Third party
import numpy as np
import pytest

# First party
from wvapy.exceptions import (
    AllTrialsFailedError,
    DimensionError,
    DomainError,
    ZeroPostselectionsError,
)
from wvapy.inference import fisher_analytic
from wvapy.model import ExperimentConfig, MeasurementMode, NoiseRegime
from wvapy.simulator import (
    SweepResult,
    asymptote,
    derive_stream,
    run_experiment,
    run_trials,
    sweep_photons,
    sweep_postselection,
    table1,
)


def reference_config(**changes):
    values = dict(
        phi=0.001,
        delta=0.1,
        alpha_sq=100.0,
        m_photons=1000,
        eta_sq=0.05,
        noise_regime=NoiseRegime.COLORED,
        measurement_mode=MeasurementMode.WEAK,
    )
    values.update(changes)
    return ExperimentConfig(**values)


def test_derive_stream():
    first = derive_stream(7, 3).random(4)
    np.testing.assert_array_equal(first, derive_stream(7, 3).random(4))
    assert not np.array_equal(first, derive_stream(7, 4).random(4))
    assert not np.array_equal(first, derive_stream(8, 3).random(4))
    derive_stream(2 ** 64 - 1, 0)
    with pytest.raises(DomainError):
        derive_stream(2 ** 64, 0)
    with pytest.raises(DomainError):
        derive_stream(-1, 0)
    with pytest.raises(DomainError):
        derive_stream(0, -1)


def test_run_experiment_without_postselection():
    config = reference_config(measurement_mode="none", m_photons=50)
    data = run_experiment(config, derive_stream(0, 0))
    assert data.n == 50
    np.testing.assert_array_equal(data.slots, np.arange(50))


def test_run_experiment_postselection_count():
    config = reference_config()
    counts = [run_experiment(config, derive_stream(1, i)).n for i in range(2000)]
    assert np.mean(counts) == pytest.approx(10.0, abs=0.3)


def test_run_experiment_slots():
    data = run_experiment(reference_config(), derive_stream(2, 0))
    assert np.all(np.diff(data.slots) > 0)
    assert data.slots.min() >= 0 and data.slots.max() < 1000


def test_realized_postselection_fraction():
    config = reference_config(m_photons=200_000)
    n = run_experiment(config, derive_stream(3, 0)).n
    p = config.keep_probability
    assert abs(n - p * 200_000) <= 3 * math.sqrt(200_000 * p * (1 - p))


def test_run_experiment_quantum_variance():
    config = reference_config(
        noise_regime="white", eta_sq=0.0, measurement_mode="none", m_photons=100_000
    )
    data = run_experiment(config, derive_stream(4, 0))
    assert data.samples.var() == pytest.approx(0.01, rel=0.03)
    assert data.samples.mean() == pytest.approx(0.001, abs=1.5e-3)


def test_run_experiment_without_postselections():
    config = reference_config(delta=0.001, phi=0.0, m_photons=10)
    with pytest.raises(ZeroPostselectionsError):
        run_experiment(config, derive_stream(5, 0))


def test_run_experiment_exact_sine():
    config = reference_config(
        phi=0.1,
        delta=0.3,
        alpha_sq=1e4,
        m_photons=1_000_000,
        noise_regime="quantum",
    )
    phase = config.signal_phase
    linear = run_experiment(config, derive_stream(6, 0))
    exact = run_experiment(config.replace(exact_sine=True), derive_stream(6, 0))
    error = 0.01 / math.sqrt(linear.n)
    assert linear.samples.mean() == pytest.approx(phase, abs=5 * error)
    assert exact.samples.mean() == pytest.approx(math.sin(phase), abs=5 * error)
    assert abs(math.sin(phase) - phase) > 10 * error


def test_run_experiment_exact_counts_below_threshold():
    config = reference_config(
        alpha_sq=20.0, noise_regime="quantum", measurement_mode="none"
    )
    data = run_experiment(config, derive_stream(7, 0))
    counts = data.samples * 20.0
    np.testing.assert_allclose(counts, np.round(counts), atol=1e-9)


def test_run_trials_is_deterministic():
    config = reference_config()
    first = run_trials(config, 200, seed=11, keep_records=True)
    assert run_trials(config, 200, seed=11, keep_records=True) == first
    assert run_trials(config, 200, seed=11, n_threads=4, keep_records=True) == first
    assert run_trials(config, 200, seed=12).mean_estimate != first.mean_estimate
    assert len(first.records) == 200
    assert run_trials(config, 200, seed=11).records == ()


def test_run_trials_validation():
    with pytest.raises(DomainError):
        run_trials(reference_config(), 1)
    with pytest.raises(DomainError):
        run_trials(reference_config(), 10, n_threads=-1)
    with pytest.raises(DomainError):
        run_trials(reference_config(), 10, seed=-5)


def test_run_trials_all_failed():
    config = reference_config(delta=0.001, phi=0.0, m_photons=10)
    with pytest.raises(AllTrialsFailedError):
        run_trials(config, 5)


def test_run_trials_counts_failed_trials(caplog):
    config = reference_config(delta=0.03, m_photons=1000)
    with caplog.at_level(logging.WARNING, logger="wvapy"):
        summary = run_trials(config, 500, seed=13, keep_records=True)
    assert 0 < summary.failed_trials < 500
    assert summary.failed_trials == sum(r.n_postselected == 0 for r in summary.records)
    assert summary.mean_postselected == pytest.approx(0.9, abs=0.15)
    assert "Dropped" in caplog.text


def test_trial_summary_dict():
    summary = run_trials(reference_config(), 50, seed=14)
    values = summary.to_dict()
    assert values["mean"] == summary.mean_estimate
    assert values["failed"] == summary.failed_trials
    assert values["analytic_fisher"] == pytest.approx(25000 / 51)
    assert values["data_law_fisher"] == pytest.approx(24.75 * 1000 / 51, rel=1e-5)
    assert summary.var_estimate >= 0


def test_efficiency_uses_fisher_information_of_the_data():
    config = reference_config(
        noise_regime="white", eta_sq=0.0, delta=0.5, m_photons=400
    )
    summary = run_trials(config, 4000, seed=23)
    assert summary.analytic_fisher == pytest.approx(1e4)
    assert summary.data_law_fisher == pytest.approx(7500.0, rel=1e-5)
    assert 0.9 <= summary.efficiency <= 1.1


@pytest.mark.slow
@pytest.mark.parametrize(
    "config",
    [
        reference_config(),
        reference_config(noise_regime="white", measurement_mode="none", m_photons=100),
    ],
)
def test_estimator_is_efficient_and_unbiased(config):
    summary = run_trials(config, 10_000, seed=15)
    assert 0.9 <= summary.efficiency <= 1.1
    standard_error = math.sqrt(summary.var_estimate / summary.n_trials)
    assert abs(summary.mean_estimate - config.phi) <= 3 * standard_error


@pytest.mark.slow
def test_white_noise_variance_scales_with_photons():
    config = reference_config(
        noise_regime="white", measurement_mode="none", m_photons=100
    )
    single = run_trials(config, 10_000, seed=16).var_estimate
    double = run_trials(config.replace(m_photons=200), 10_000, seed=17).var_estimate
    assert single / double == pytest.approx(2.0, rel=0.1)


@pytest.mark.slow
def test_colored_noise_variance_saturates():
    config = reference_config(m_photons=20_000)
    saturated = run_trials(config, 10_000, seed=18).var_estimate
    more = run_trials(config.replace(m_photons=80_000), 10_000, seed=19).var_estimate
    assert 0.9 <= saturated / more <= 1.1


@pytest.mark.slow
def test_weak_measurement_improvement_factor():
    config = reference_config(m_photons=5000)
    weak = run_trials(config, 10_000, seed=20).var_estimate
    nops = run_trials(
        config.replace(measurement_mode="none"), 10_000, seed=21
    ).var_estimate
    assert nops / weak == pytest.approx(1 / (4 * 0.1 ** 2), rel=0.1)


@pytest.mark.slow
def test_empirical_snr_matches_analytic():
    config = ExperimentConfig(
        phi=1e-3,
        delta=0.05,
        alpha_sq=1e6,
        m_photons=100_000,
        eta_sq=1e-8,
        noise_regime="colored",
    )
    summary = run_trials(config, 10_000, seed=22, n_threads=0)
    assert summary.snr_analytic == pytest.approx(84.5, rel=0.01)
    assert summary.snr_empirical == pytest.approx(summary.snr_analytic, rel=0.1)


def test_sweep_postselection_reference():
    deltas = np.linspace(0.05, 0.5, 10)
    result = sweep_postselection(reference_config(), list(deltas) + [0.1, 0.2])
    np.testing.assert_allclose(result.axis[:10], deltas ** 2)
    assert result.axis_name == "postselection_probability"
    np.testing.assert_allclose(
        result.fisher_analytic["no_postselection"], 100000 / 5001, rtol=1e-12
    )
    weak = result.fisher_analytic["weak"]
    assert np.all(np.diff(weak[:10]) < 0)
    assert weak[10] == pytest.approx(25000 / 51, rel=1e-9)
    assert weak[11] == pytest.approx(25000 / 201, rel=1e-9)
    assert result.fisher_numeric is None
    assert result.labels == ["weak", "no_postselection"]


def test_sweep_postselection_forces_weak_measurement():
    result = sweep_postselection(reference_config(measurement_mode="none"), [0.1])
    assert result.fisher_analytic["weak"][0] == pytest.approx(25000 / 51)


def test_sweep_postselection_warns_outside_weak_regime(caplog):
    with caplog.at_level(logging.WARNING, logger="wvapy"):
        sweep_postselection(reference_config(m_photons=1_000_000), [0.005, 0.1])
    assert "delta=0.005" in caplog.text
    assert "delta=0.1 " not in caplog.text


def test_sweep_postselection_numeric():
    result = sweep_postselection(
        reference_config(), [0.1, 0.2], numeric=True, n_datasets=4000, seed=3
    )
    assert result.fisher_numeric.shape == (2,)
    assert np.all(result.numeric_se > 0)
    assert result.labels == ["weak", "no_postselection", "data_law"]
    np.testing.assert_allclose(
        result.fisher_numeric, result.fisher_analytic["data_law"], rtol=0.15
    )
    threaded = sweep_postselection(
        reference_config(),
        [0.1, 0.2],
        numeric=True,
        n_datasets=4000,
        seed=3,
        n_threads=2,
    )
    np.testing.assert_array_equal(threaded.fisher_numeric, result.fisher_numeric)


def test_sweep_postselection_numeric_at_large_delta():
    config = reference_config(noise_regime="white", eta_sq=0.0, m_photons=400)
    result = sweep_postselection(config, [0.5], numeric=True, n_datasets=4000, seed=4)
    assert result.fisher_analytic["weak"][0] == pytest.approx(1e4)
    assert result.fisher_analytic["data_law"][0] == pytest.approx(7500.0, rel=1e-5)
    ratio = result.fisher_numeric[0] / result.fisher_analytic["data_law"][0]
    assert 0.9 <= ratio <= 1.1


def test_sweep_postselection_validation():
    with pytest.raises(DomainError):
        sweep_postselection(reference_config(), [])
    with pytest.raises(DomainError):
        sweep_postselection(reference_config(), [0.1], n_threads=-1)


def test_sweep_photons_reference():
    ms = [10, 100, 1000, 10_000, 100_000, 1_000_000]
    result = sweep_photons(reference_config(), ms, [0.01, 0.03])
    assert result.labels == ["p1", "p2", "nops"]
    assert result.post_probs == (0.01, 0.03)
    assert result.asymptotes["p1"] == pytest.approx(500.0)
    assert result.asymptotes["p2"] == pytest.approx(1 / (4 * 0.03 * 0.05))
    assert result.asymptotes["nops"] == pytest.approx(20.0)
    for curve in result.fisher_analytic.values():
        finite = curve[np.isfinite(curve)]
        assert np.all(np.diff(finite) >= 0)
    nops = result.fisher_analytic["nops"]
    for index in (4, 5):
        ratio_1 = result.fisher_analytic["p1"][index] / nops[index]
        ratio_3 = result.fisher_analytic["p2"][index] / nops[index]
        assert ratio_1 == pytest.approx(25.0, rel=0.01)
        assert ratio_3 == pytest.approx(25 / 3, rel=0.01)
    assert result.fisher_analytic["p1"][-1] == pytest.approx(500.0, rel=0.01)


def test_sweep_photons_without_data_is_nan(caplog):
    with caplog.at_level(logging.WARNING, logger="wvapy"):
        result = sweep_photons(reference_config(), [10, 1000], [0.01])
    assert math.isnan(result.fisher_analytic["p1"][0])
    assert result.fisher_analytic["p1"][1] == pytest.approx(25000 / 51)
    assert "expect no postselected data" in caplog.text


def test_sweep_photons_half_saturation():
    config = reference_config(alpha_sq=1e4, eta_sq=1e-4)
    # |alpha|^2 M eta^2 delta^2 = 1 at M = 100
    result = sweep_photons(config, [100], [0.01])
    assert result.fisher_analytic["p1"][0] == pytest.approx(
        0.5 * result.asymptotes["p1"], rel=1e-9
    )


@pytest.mark.parametrize(
    "m_values, probs", [([], [0.01]), ([0, 10], [0.01]), ([10], [0.0]), ([10], [0.6])]
)
def test_sweep_photons_validation(m_values, probs):
    with pytest.raises(DomainError):
        sweep_photons(reference_config(), m_values, probs)


def test_asymptote():
    assert asymptote(reference_config(noise_regime="white")) == math.inf
    assert asymptote(reference_config(measurement_mode="none")) == pytest.approx(20.0)
    strong = reference_config(phi=0.02, delta=0.01, measurement_mode="strong")
    assert asymptote(strong) == pytest.approx(strong.calibration_factor ** 2 / 0.05)


def test_sweep_result_lengths():
    with pytest.raises(DimensionError):
        SweepResult("x", np.arange(3), {"a": np.zeros(2)})


def test_table1():
    report = table1(100.0, 1000, 0.05, 0.1, 0.02)
    c = 100.0 / (1 + 100 * 0.05)
    white = report.entries[NoiseRegime.WHITE]
    assert white[MeasurementMode.NO_POSTSELECTION] == pytest.approx(c * 1000, rel=1e-12)
    assert white[MeasurementMode.WEAK] == pytest.approx(c * 1000 / 4, rel=1e-12)
    assert white[MeasurementMode.STRONG] == pytest.approx(c * 1000 / 8, rel=1e-12)
    quantum = report.entries[NoiseRegime.PURELY_QUANTUM]
    assert [quantum[m] for m in MeasurementMode] == pytest.approx(
        [1e5, 2.5e4, 1.25e4], rel=1e-12
    )
    colored = report.entries[NoiseRegime.COLORED]
    assert [colored[m] for m in MeasurementMode] == pytest.approx(
        [20.0, 500.0, 1 / (4 * 0.02 ** 2 * 0.05)], rel=1e-12
    )


def test_table1_agrees_with_fisher_analytic():
    report = table1(100.0, 1000, 0.05, 0.1, 0.02)
    config = ExperimentConfig(0.02, 0.1, 100.0, 1000, eta_sq=0.05)
    weak = fisher_analytic(config).analytic
    assert report.entries[NoiseRegime.WHITE][MeasurementMode.WEAK] == pytest.approx(
        weak, rel=1e-12
    )
    strong = fisher_analytic(config.replace(delta=0.01, measurement_mode="strong"))
    assert report.entries[NoiseRegime.WHITE][
        MeasurementMode.STRONG
    ] == pytest.approx(strong.analytic, rel=1e-3)


def test_table1_rows():
    report = table1(100.0, 1000, 0.05, 0.1, 0.02)
    rows = report.rows()
    assert [row[0] for row in rows] == ["white", "quantum", "colored"]
    assert report.to_dict()["colored"]["weak"] == pytest.approx(500.0)
    with pytest.raises(DomainError):
        table1(100.0, 1000, 0.05, 0.1, 0.0)
