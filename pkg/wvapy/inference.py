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
"""
Likelihood, Fisher information and the maximum-likelihood estimator.

The ``N`` recorded data ``s_i`` are jointly Gaussian with mean ``f phi`` and
the covariance ``C`` of :mod:`wvapy.noise`. The score and the Fisher
information are

    score(phi) = f 1^T C^-1 s - f^2 phi sum_ij C^-1_ij
    I(phi)     = f^2 sum_ij C^-1_ij,

and the estimator ``phi_hat = mean(s) / f`` attains the Cramer-Rao bound for
white and fully correlated noise.

The analytic Fisher information follows three conventions for ``(f^2, N)``:

* no postselection: ``(1, M)``
* weak measurement: ``(1 / (4 delta^2), delta^2 M)``, the weak-value limit
* strong measurement: the full amplification factor and ``N = P M``

``N`` is the expected number of data and is not rounded, except for the
exponential noise model which needs an integer matrix size.

The weak-value limit overstates ``f^2`` by ``1 / (1 - delta^2)`` and counts
``delta^2 M`` instead of ``P M`` data. The data the simulator draws carry
the exact weak value ``N_w`` and ``P M`` data on average, so
:func:`fisher_data_law` gives the Fisher information Monte-Carlo results
are compared with. Both values coincide without postselection and for
strong measurements.
"""

# Core Library
import dataclasses
import logging
import math
from typing import Any, Dict, Optional, Tuple

# Third party
import numpy as np

# First party
from wvapy.exceptions import DegenerateInputError, DimensionError, DomainError
from wvapy.model import (
    ExperimentConfig,
    MeasurementMode,
    NoiseRegime,
    amplification_factor,
    postselection_probability,
)
from wvapy.noise import (
    CovarianceMatrix,
    NoiseModel,
    Slots,
    inverse_covariance,
    inverse_row_sums,
    log_determinant,
    sample_noise,
)
from wvapy.photostats import GAUSSIAN_THRESHOLD, sample_d

logger = logging.getLogger(__name__)

MIN_DATASETS = 100
_BATCH_ENTRIES = 1 << 20


@dataclasses.dataclass(frozen=True, eq=False)
class DataSet:
    """
    The recorded data of one experiment.

    Parameters
    ----------
    samples : np.ndarray
        normalised difference counts ``s_i``
    config : ExperimentConfig
        configuration the data were taken with
    slots : np.ndarray, optional
        injection slots of the postselected photons
    """

    samples: np.ndarray
    config: ExperimentConfig
    slots: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise DimensionError(
                f"samples must be a non-empty vector, got shape {samples.shape}"
            )
        if samples.size > self.config.m_photons:
            raise DimensionError(
                f"{samples.size} data exceed m_photons={self.config.m_photons}"
            )
        object.__setattr__(self, "samples", samples)
        if self.slots is not None:
            slots = np.asarray(self.slots)
            if slots.shape != samples.shape:
                raise DimensionError(
                    f"Got {slots.size} slots for {samples.size} samples"
                )
            object.__setattr__(self, "slots", slots)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def noise_slots(self) -> Slots:
        """Slots the noise correlations decay with, ``None`` for index mode."""
        if self.config.time_indexed_noise:
            return self.slots
        return None

    def inverse_covariance(self) -> CovarianceMatrix:
        return inverse_covariance(
            self.n, NoiseModel.from_config(self.config), self.noise_slots
        )

    def log_determinant(self) -> float:
        return log_determinant(
            self.n, NoiseModel.from_config(self.config), self.noise_slots
        )


@dataclasses.dataclass(frozen=True)
class FisherReport:
    """
    Fisher information of one configuration.

    ``analytic`` is the regime value, ``data_law`` the one of the simulated
    data. ``numeric``, ``numeric_se`` and ``n_datasets`` are only set for a
    Monte-Carlo evaluation, which estimates ``data_law``.
    """

    analytic: float
    data_law: float
    regime: MeasurementMode
    noise_kind: NoiseRegime
    numeric: Optional[float] = None
    numeric_se: Optional[float] = None
    n_datasets: Optional[int] = None

    @property
    def crlb(self) -> float:
        """Cramer-Rao lower bound ``1 / I``."""
        return 1.0 / self.analytic

    def to_dict(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "analytic": self.analytic,
            "crlb": self.crlb,
            "data_law": self.data_law,
            "regime": self.regime.value,
            "noise": self.noise_kind.value,
        }
        if self.numeric is not None:
            report["numeric"] = self.numeric
            report["numeric_se"] = self.numeric_se
            report["n_datasets"] = self.n_datasets
        return report


@dataclasses.dataclass(frozen=True)
class EstimatorStats:
    std_dev: float
    snr: float
    fisher: float


def signal_mean(config: ExperimentConfig) -> float:
    """Mean of every datum, ``f phi`` or ``sin(f phi)``."""
    if config.exact_sine:
        return math.sin(config.signal_phase)
    return config.signal_phase


def draw_samples(
    rng: np.random.Generator,
    config: ExperimentConfig,
    n: int,
    slots: Slots = None,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    Draw ``n`` data ``s_i = D~_i + eta_i`` from the data law of ``config``.

    Above the Gaussian threshold ``D~`` is normal with variance
    ``1/|alpha|^2``; below it the exact photocount difference is divided by
    ``|alpha|^2``.

    Parameters
    ----------
    rng : np.random.Generator
    config : ExperimentConfig
    n : int
        number of data
    slots : sequence of float, optional
        injection slots, used by the noise in time-indexed mode
    size : int, optional
        number of independent datasets

    Returns
    -------
    samples : np.ndarray
        shape ``(n,)`` or ``(size, n)``
    """
    shape = (n,) if size is None else (size, n)
    alpha_sq = config.alpha_sq
    if alpha_sq >= GAUSSIAN_THRESHOLD:
        quantum = rng.normal(signal_mean(config), 1.0 / math.sqrt(alpha_sq), shape)
    else:
        quantum = sample_d(rng, alpha_sq, config.signal_phase, size=shape) / alpha_sq
    noise_slots = slots if config.time_indexed_noise else None
    model = NoiseModel.from_config(config)
    return quantum + sample_noise(rng, n, model, noise_slots, size=size)


def _check_compatible(data: DataSet) -> float:
    factor = data.config.calibration_factor
    if factor == 0.0:
        raise DegenerateInputError("The amplification factor is zero")
    return factor


def log_likelihood(data: DataSet, phi: float) -> float:
    """
    Gaussian log-likelihood of ``phi`` given the data.

    The amplification factor is held at the calibration value of the
    configuration.

    Raises
    ------
    SingularCovarianceError
        if the covariance is not positive definite
    """
    factor = _check_compatible(data)
    inverse = data.inverse_covariance()
    residual = data.samples - factor * phi
    quadratic = float(residual @ inverse.entries @ residual)
    return -0.5 * quadratic - 0.5 * (
        data.n * math.log(2.0 * math.pi) + data.log_determinant()
    )


def score(data: DataSet, phi: float) -> float:
    """
    Derivative of the log-likelihood with respect to ``phi``.

    Examples
    --------
    >>> config = ExperimentConfig(phi=0.001, delta=0.1, alpha_sq=100.0,
    ...                           m_photons=1000, measurement_mode="none")
    >>> score(DataSet(np.full(3, 0.25), config), 0.25)
    0.0
    """
    factor = _check_compatible(data)
    weights = data.inverse_covariance().row_sums()
    return float(
        factor * (weights @ data.samples) - factor * factor * phi * weights.sum()
    )


def _check_count(n: float, m_photons: int) -> float:
    if n < 1.0:
        raise DegenerateInputError(
            f"Expected {n:g} postselected data for m_photons={m_photons}, "
            "need at least one"
        )
    return n


def fisher_terms(config: ExperimentConfig) -> Tuple[float, float]:
    """
    Squared amplification factor and expected number of data.

    Raises
    ------
    DegenerateInputError
        if less than one datum is expected
    """
    mode = config.measurement_mode
    m_photons = config.m_photons
    if mode is MeasurementMode.NO_POSTSELECTION:
        return 1.0, _check_count(float(m_photons), m_photons)
    if mode is MeasurementMode.WEAK:
        n = _check_count(config.delta ** 2 * m_photons, m_photons)
        return 1.0 / (4.0 * config.delta ** 2), n
    stats = config.postselection
    return stats.amp_factor ** 2, _check_count(stats.prob * m_photons, m_photons)


def _evenly_spaced_slots(config: ExperimentConfig, n: float, size: int) -> Slots:
    if not config.time_indexed_noise:
        return None
    spacing = config.m_photons / n
    return np.arange(size) * spacing


def _information_sum(config: ExperimentConfig, n: float) -> float:
    """Sum over all entries of the inverse covariance of ``n`` data."""
    alpha_sq = config.alpha_sq
    eta_sq = config.effective_eta_sq
    kind = config.noise_regime
    if kind in (NoiseRegime.WHITE, NoiseRegime.PURELY_QUANTUM):
        return n * alpha_sq / (1.0 + alpha_sq * eta_sq)
    if kind is NoiseRegime.COLORED:
        return n * alpha_sq / (1.0 + n * alpha_sq * eta_sq)
    size = max(1, round(n))
    model = NoiseModel.from_config(config)
    slots = _evenly_spaced_slots(config, n, size)
    return float(inverse_row_sums(size, model, slots).sum())


def fisher_data_law(config: ExperimentConfig) -> float:
    """
    Fisher information of the data the simulator draws.

    It uses the calibration factor and the expected count ``P M``. Without
    postselection and for strong measurements it equals the regime value of
    :func:`fisher_analytic`.

    Raises
    ------
    DegenerateInputError
        if less than one datum is expected

    Examples
    --------
    >>> config = ExperimentConfig(phi=0.0, delta=0.5, alpha_sq=100.0,
    ...                           m_photons=400)
    >>> round(fisher_data_law(config), 9)
    7500.0
    """
    n = _check_count(config.expected_count, config.m_photons)
    factor = config.calibration_factor
    return factor * factor * _information_sum(config, n)


def fisher_analytic(config: ExperimentConfig) -> FisherReport:
    """
    Analytic Fisher information of one experiment.

    Parameters
    ----------
    config : ExperimentConfig

    Returns
    -------
    report : FisherReport
        with the regime value and the value of the simulated data

    Raises
    ------
    DegenerateInputError
        if less than one postselected datum is expected

    Examples
    --------
    >>> config = ExperimentConfig(phi=0.001, delta=0.1, alpha_sq=100.0,
    ...                           m_photons=1000, eta_sq=0.05,
    ...                           noise_regime="colored")
    >>> round(fisher_analytic(config).analytic, 6)
    490.196078
    """
    factor_sq, n = fisher_terms(config)
    return FisherReport(
        analytic=factor_sq * _information_sum(config, n),
        data_law=fisher_data_law(config),
        regime=config.measurement_mode,
        noise_kind=config.noise_regime,
    )


def fisher_postselected_general(config: ExperimentConfig) -> float:
    """
    Fisher information with the full amplification factor and ``N = P M``.

    Unlike :func:`fisher_analytic` this does not take the weak-value limit,
    so it holds for any postselected measurement.
    """
    probability = postselection_probability(config.delta, config.phi)
    n = _check_count(probability * config.m_photons, config.m_photons)
    factor = amplification_factor(config.delta, config.phi)
    return factor * factor * _information_sum(config, n)


def fisher_numeric(
    config: ExperimentConfig,
    n_datasets: int = 10_000,
    rng: Optional[np.random.Generator] = None,
) -> FisherReport:
    """
    Monte-Carlo estimate of the Fisher information, ``E[score^2]``.

    Every synthetic dataset has the expected number of data ``P M``
    (rounded) and is drawn at the true ``phi`` from the same law as the
    simulator uses, so the estimate approaches ``data_law``.

    Parameters
    ----------
    config : ExperimentConfig
    n_datasets : int
        number of synthetic datasets, at least 100
    rng : np.random.Generator, optional

    Returns
    -------
    report : FisherReport
        analytic and numeric value with the standard error of the latter
    """
    if n_datasets < MIN_DATASETS:
        raise DomainError(f"n_datasets={n_datasets} must be >= {MIN_DATASETS}")
    if rng is None:
        rng = np.random.default_rng()
    analytic = fisher_analytic(config)
    expected = config.expected_count
    size = max(1, round(expected))
    factor = config.calibration_factor
    slots = _evenly_spaced_slots(config, expected, size)
    weights = inverse_row_sums(size, NoiseModel.from_config(config), slots)
    offset = factor * factor * config.phi * weights.sum()

    batch = max(1, _BATCH_ENTRIES // size)
    scores = np.empty(n_datasets)
    for start in range(0, n_datasets, batch):
        stop = min(n_datasets, start + batch)
        samples = draw_samples(rng, config, size, slots, size=stop - start)
        scores[start:stop] = factor * (samples @ weights) - offset
    squared = scores * scores
    numeric = float(squared.mean())
    numeric_se = float(squared.std(ddof=1) / math.sqrt(n_datasets))
    logger.debug(
        f"Numeric Fisher {numeric:.6g} +- {numeric_se:.2g}, "
        f"data law {analytic.data_law:.6g}"
    )
    return dataclasses.replace(
        analytic, numeric=numeric, numeric_se=numeric_se, n_datasets=n_datasets
    )


def mle_estimate(data: DataSet) -> float:
    """
    Maximum-likelihood estimate ``mean(s) / f``.

    Examples
    --------
    >>> config = ExperimentConfig(phi=0.001, delta=0.1, alpha_sq=100.0,
    ...                           m_photons=1000, measurement_mode="none")
    >>> mle_estimate(DataSet(np.array([0.25, 0.75]), config))
    0.5
    """
    factor = _check_compatible(data)
    return math.fsum(data.samples) / data.n / factor


def gls_estimate(data: DataSet) -> float:
    """
    Generalised least-squares estimate ``1^T C^-1 s / (f 1^T C^-1 1)``.

    It maximises the likelihood for every covariance and equals
    :func:`mle_estimate` whenever all row sums of ``C^-1`` agree.
    """
    factor = _check_compatible(data)
    weights = data.inverse_covariance().row_sums()
    return float(weights @ data.samples) / (factor * float(weights.sum()))


def estimator_stats(config: ExperimentConfig) -> EstimatorStats:
    """
    Standard deviation and signal-to-noise ratio of the estimator.

    Both follow from the Cramer-Rao bound of :func:`fisher_analytic`.
    """
    fisher = fisher_analytic(config).analytic
    std_dev = 1.0 / math.sqrt(fisher)
    return EstimatorStats(std_dev=std_dev, snr=config.phi / std_dev, fisher=fisher)


def snr_colored_limit(config: ExperimentConfig) -> float:
    """Saturated colored-noise SNR ``phi |N_w| / eta`` of a weak measurement."""
    eta = math.sqrt(config.effective_eta_sq)
    if eta == 0.0:
        return math.inf
    return config.phi * abs(config.calibration_factor) / eta
