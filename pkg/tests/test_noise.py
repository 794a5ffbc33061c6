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
import math

# Third party
import numpy as np
import pytest

# First party
from wvapy.exceptions import DimensionError, DomainError
from wvapy.model import ExperimentConfig, NoiseRegime
from wvapy.noise import (
    MAX_TOEPLITZ_SIZE,
    NoiseModel,
    covariance,
    inverse_covariance,
    inverse_row_sums,
    log_determinant,
    sample_noise,
)

KINDS = list(NoiseRegime)


def make_model(kind, eta_sq=0.05, alpha_sq=100.0, rho=math.exp(-0.5)):
    return NoiseModel(kind, eta_sq=eta_sq, alpha_sq=alpha_sq, rho=rho)


def test_covariance_colored_example():
    entries = covariance(2, make_model(NoiseRegime.COLORED)).entries
    np.testing.assert_allclose(entries, [[0.06, 0.05], [0.05, 0.06]], rtol=1e-14)


def test_covariance_white_and_quantum():
    white = covariance(5, make_model(NoiseRegime.WHITE)).entries
    np.testing.assert_allclose(white, 0.06 * np.eye(5), rtol=1e-14)
    quantum = covariance(5, make_model(NoiseRegime.PURELY_QUANTUM)).entries
    np.testing.assert_allclose(quantum, 0.01 * np.eye(5), rtol=1e-14)


def test_exponential_without_correlation_is_white():
    exponential = covariance(8, make_model(NoiseRegime.EXPONENTIAL, rho=0.0))
    white = covariance(8, make_model(NoiseRegime.WHITE))
    np.testing.assert_array_equal(exponential.entries, white.entries)


def test_exponential_covariance_entries():
    model = make_model(NoiseRegime.EXPONENTIAL)
    entries = covariance(4, model).entries
    assert entries[0, 0] == pytest.approx(0.06)
    assert entries[0, 3] == pytest.approx(0.05 * math.exp(-1.5))
    np.testing.assert_array_equal(entries, entries.T)


def test_exponential_is_monotone_in_rho():
    n = 10
    white = covariance(n, make_model(NoiseRegime.WHITE)).entries
    colored = covariance(n, make_model(NoiseRegime.COLORED)).entries
    previous = white
    for rho in [0.1, 0.5, 0.9, 0.999]:
        entries = covariance(n, make_model(NoiseRegime.EXPONENTIAL, rho=rho)).entries
        assert np.all(entries >= previous - 1e-15)
        assert np.all(entries <= colored + 1e-15)
        previous = entries


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", [1, 2, 17, 200])
def test_inverse_covariance_is_inverse(kind, n):
    model = make_model(kind)
    product = covariance(n, model).entries @ inverse_covariance(n, model).entries
    np.testing.assert_allclose(product, np.eye(n), rtol=0, atol=1e-10)


def test_inverse_covariance_colored_example():
    entries = inverse_covariance(2, make_model(NoiseRegime.COLORED)).entries
    downdate = 0.05 * 1e4 / (1 + 2 * 0.05 * 100)
    np.testing.assert_allclose(
        entries, [[100 - downdate, -downdate], [-downdate, 100 - downdate]]
    )
    assert downdate == pytest.approx(45.4545, abs=1e-4)


@pytest.mark.parametrize("n", range(1, 51))
def test_colored_information_sum(n):
    model = make_model(NoiseRegime.COLORED)
    dense = np.linalg.inv(covariance(n, model).entries).sum()
    closed = n * 100 / (1 + n * 100 * 0.05)
    assert inverse_covariance(n, model).total() == pytest.approx(closed, rel=1e-10)
    assert dense == pytest.approx(closed, rel=1e-10)


def test_white_information_sum():
    model = make_model(NoiseRegime.WHITE)
    assert inverse_covariance(30, model).total() == pytest.approx(
        30 * 100 / (1 + 100 * 0.05), rel=1e-12
    )


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize(
    "slots", [None, np.arange(25) * 3.0, np.cumsum(np.arange(1, 26)).astype(float)]
)
def test_inverse_row_sums_match_dense_inverse(kind, slots):
    model = make_model(kind)
    expected = inverse_covariance(25, model, slots).row_sums()
    np.testing.assert_allclose(
        inverse_row_sums(25, model, slots), expected, rtol=1e-9, atol=1e-9
    )


def test_inverse_row_sums_of_many_correlated_data():
    model = make_model(NoiseRegime.EXPONENTIAL)
    n = 20_000
    rho = math.exp(-0.5)
    stationary = 1 / (0.01 + 0.05 * (1 + rho) / (1 - rho))
    assert inverse_row_sums(n, model).sum() / n == pytest.approx(stationary, rel=1e-3)


def test_inverse_row_sums_size_limit():
    model = make_model(NoiseRegime.EXPONENTIAL)
    with pytest.raises(DomainError, match="exceed the limit"):
        inverse_row_sums(MAX_TOEPLITZ_SIZE + 1, model)
    colored = inverse_row_sums(MAX_TOEPLITZ_SIZE + 1, make_model(NoiseRegime.COLORED))
    assert colored.size == MAX_TOEPLITZ_SIZE + 1


def test_covariance_is_positive_semidefinite():
    rng = np.random.default_rng(7)
    for _ in range(20):
        model = make_model(
            KINDS[rng.integers(len(KINDS))],
            eta_sq=rng.uniform(0, 1),
            alpha_sq=10 ** rng.uniform(0, 4),
            rho=rng.uniform(0, 0.999),
        )
        n = int(rng.integers(1, 201))
        assert np.linalg.eigvalsh(covariance(n, model).entries).min() >= -1e-12


@pytest.mark.parametrize("kind", KINDS)
def test_log_determinant(kind):
    model = make_model(kind)
    sign, expected = np.linalg.slogdet(covariance(40, model).entries)
    assert sign == 1
    assert log_determinant(40, model) == pytest.approx(expected, rel=1e-10)


def test_slots_change_exponential_correlations():
    model = make_model(NoiseRegime.EXPONENTIAL)
    spaced = covariance(5, model, slots=np.arange(5) * 2.0).entries
    squared = covariance(5, make_model(NoiseRegime.EXPONENTIAL, rho=math.exp(-1)))
    np.testing.assert_allclose(spaced, squared.entries, rtol=1e-12)
    colored = make_model(NoiseRegime.COLORED)
    np.testing.assert_array_equal(
        covariance(3, colored, slots=[0, 4, 9]).entries, covariance(3, colored).entries
    )


def test_slots_validation():
    model = make_model(NoiseRegime.EXPONENTIAL)
    with pytest.raises(DimensionError):
        covariance(3, model, slots=[0, 1])
    with pytest.raises(DomainError):
        covariance(3, model, slots=[0, 2, 2])
    with pytest.raises(DomainError):
        covariance(0, model)


@pytest.mark.parametrize(
    "changes", [{"eta_sq": -1.0}, {"alpha_sq": 0.0}, {"rho": 1.0}, {"kind": "pink"}]
)
def test_noise_model_validation(changes):
    values = dict(kind="white", eta_sq=0.05, alpha_sq=100.0, rho=0.0)
    values.update(changes)
    with pytest.raises(DomainError):
        NoiseModel(**values)


def test_noise_model_from_config():
    config = ExperimentConfig(
        0.001,
        0.1,
        100.0,
        1000,
        gamma_rate=1e6,
        tau_corr=2e-6,
        eta_sq=0.05,
        noise_regime="exponential",
    )
    model = NoiseModel.from_config(config)
    assert model.kind is NoiseRegime.EXPONENTIAL
    assert model.rho == pytest.approx(math.exp(-0.5))
    assert model.alpha_sq == 100.0


def test_sample_noise_quantum_is_zero():
    rng = np.random.default_rng(8)
    model = make_model(NoiseRegime.PURELY_QUANTUM)
    assert np.all(sample_noise(rng, 10, model) == 0)
    assert sample_noise(rng, 10, model, size=3).shape == (3, 10)


def test_sample_noise_white():
    rng = np.random.default_rng(9)
    paths = sample_noise(rng, 10, make_model(NoiseRegime.WHITE), size=20_000)
    empirical = np.cov(paths, rowvar=False)
    np.testing.assert_allclose(empirical, 0.05 * np.eye(10), atol=3e-3)


def test_sample_noise_colored_paths_are_constant():
    rng = np.random.default_rng(10)
    paths = sample_noise(rng, 6, make_model(NoiseRegime.COLORED), size=100_000)
    assert np.all(paths == paths[:, :1])
    assert paths[:, 0].var() == pytest.approx(0.05, rel=0.03)


def test_sample_noise_ar1_covariance():
    rng = np.random.default_rng(11)
    rho = math.exp(-0.5)
    paths = sample_noise(rng, 12, make_model(NoiseRegime.EXPONENTIAL), size=100_000)
    assert paths.mean() == pytest.approx(0.0, abs=3e-3)
    empirical = np.cov(paths, rowvar=False)
    lags = np.abs(np.subtract.outer(np.arange(12), np.arange(12)))
    np.testing.assert_allclose(empirical, 0.05 * rho ** lags, rtol=0, atol=5e-3)
    variances = np.diag(empirical)
    assert variances.max() - variances.min() < 3e-3


def test_sample_noise_ar1_with_slots():
    rng = np.random.default_rng(12)
    slots = np.array([0.0, 1.0, 4.0, 5.0, 9.0])
    model = make_model(NoiseRegime.EXPONENTIAL)
    paths = sample_noise(rng, 5, model, slots=slots, size=100_000)
    expected = covariance(5, model, slots=slots).entries - 0.01 * np.eye(5)
    np.testing.assert_allclose(
        np.cov(paths, rowvar=False), expected, rtol=0, atol=5e-3
    )


def test_sample_noise_single_path():
    rng = np.random.default_rng(13)
    path = sample_noise(rng, 7, make_model(NoiseRegime.EXPONENTIAL))
    assert path.shape == (7,)
