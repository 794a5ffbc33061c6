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
Experiment configuration and postselection statistics.

A single photon enters the lower interferometer, whose polarization-dependent
beamsplitter (PDBS) has the imbalance ``delta``. Detecting the photon in the
dark port happens with the postselection probability

    P = delta^2 + phi^2 / 4

and displaces the mechanical oscillator by an amount proportional to the
amplification factor

    f = -delta * sqrt(1 - delta^2) / (2 P),

which approaches the weak value ``N_w = -sqrt(1 - delta^2) / (2 delta)`` when
``delta^2 >> phi^2``. The estimated parameter is the scaled coupling
``phi = g0 / omega_m``.

References
----------
.. [1] A. Feizpour, X. Xing and A. M. Steinberg. Amplifying single-photon
       nonlinearity using weak measurements. Phys. Rev. Lett. 107, 133603
       (2011).
.. [2] M. Aspelmeyer, T. J. Kippenberg and F. Marquardt. Cavity
       optomechanics. Rev. Mod. Phys. 86, 1391 (2014).
"""

# Core Library
import dataclasses
import enum
import json
import logging
import math
from typing import Any, Dict, Union

# Third party
from pkg_resources import resource_filename

# First party
from wvapy.exceptions import DegenerateInputError, DomainError

logger = logging.getLogger(__name__)

with open(resource_filename(__name__, "data/constants.json"), "r") as f:
    CONSTANTS: Dict[str, Any] = json.load(f)

HBAR: float = CONSTANTS["hbar"]
MAX_DELTA: float = 1.0 / math.sqrt(2.0)
WEAK_RATIO_THRESHOLD: float = CONSTANTS["weak_ratio_threshold"]
STRONG_TOLERANCE: float = CONSTANTS["strong_tolerance"]
PHI_WARNING: float = CONSTANTS["phi_warning"]

# 1/sqrt(2) is not exactly representable; accept the boundary itself.
_DELTA_SLACK = 1e-12


class NoiseRegime(enum.Enum):
    """Technical noise model of a run."""

    WHITE = "white"
    COLORED = "colored"
    PURELY_QUANTUM = "quantum"
    EXPONENTIAL = "exponential"

    @classmethod
    def parse(cls, value: Union[str, "NoiseRegime"]) -> "NoiseRegime":
        """Accept an enum member, its value or its (case-insensitive) name."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise DomainError(f"Unknown noise regime '{value}'")


class MeasurementMode(enum.Enum):
    """Whether and how strongly the photons are postselected."""

    NO_POSTSELECTION = "none"
    WEAK = "weak"
    STRONG = "strong"

    @classmethod
    def parse(cls, value: Union[str, "MeasurementMode"]) -> "MeasurementMode":
        """Accept an enum member, its value or its (case-insensitive) name."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise DomainError(f"Unknown measurement mode '{value}'")


class Regime(enum.Enum):
    """Measurement regime implied by the pair (delta, phi)."""

    WEAK = "weak"
    STRONG = "strong"
    INTERMEDIATE = "intermediate"
    NO_POSTSELECTION = "none"


def _check_delta(delta: float) -> None:
    if not math.isfinite(delta) or abs(delta) > MAX_DELTA + _DELTA_SLACK:
        raise DomainError(f"delta={delta} must satisfy |delta| <= 1/sqrt(2)")


def _check_phi(phi: float) -> None:
    if not math.isfinite(phi) or phi < 0:
        raise DomainError(f"phi={phi} must be a finite number >= 0")


def postselection_probability(delta: float, phi: float) -> float:
    """
    Probability of detecting the injected photon in the dark port.

    Parameters
    ----------
    delta : float
        PDBS imbalance, ``|delta| <= 1/sqrt(2)``
    phi : float
        scaled optomechanical coupling, ``phi >= 0``

    Returns
    -------
    prob : float
        ``delta^2 + phi^2 / 4``

    Examples
    --------
    >>> postselection_probability(0.1, 0.0)
    0.010000000000000002
    >>> postselection_probability(0.0, 0.0)
    0.0
    """
    _check_delta(delta)
    _check_phi(phi)
    prob = delta * delta + phi * phi / 4.0
    if prob > 1.0:
        raise DomainError(
            f"delta={delta}, phi={phi} give a postselection probability "
            f"{prob} > 1"
        )
    return prob


def amplification_factor(delta: float, phi: float) -> float:
    """
    Amplification factor of the postselected mechanical displacement.

    Parameters
    ----------
    delta : float
        PDBS imbalance, ``|delta| <= 1/sqrt(2)``
    phi : float
        scaled optomechanical coupling

    Returns
    -------
    f : float
        ``-delta * sqrt(1 - delta^2) / (2 P)``, its sign is ``-sign(delta)``

    Raises
    ------
    DegenerateInputError
        if ``delta = phi = 0``, i.e. nothing is ever postselected

    Examples
    --------
    >>> round(amplification_factor(0.01, 0.02), 3)
    -24.999
    """
    prob = postselection_probability(delta, phi)
    if prob == 0.0:
        raise DegenerateInputError(
            "The amplification factor is undefined for delta = phi = 0"
        )
    return -delta * math.sqrt(1.0 - delta * delta) / (2.0 * prob)


def weak_value(delta: float) -> float:
    """
    Weak value ``N_w``, the ``phi -> 0`` limit of the amplification factor.

    Examples
    --------
    >>> round(weak_value(1 / math.sqrt(2)), 12)
    -0.5
    """
    _check_delta(delta)
    if delta == 0.0:
        raise DomainError("The weak value diverges at delta = 0")
    return -math.sqrt(1.0 - delta * delta) / (2.0 * delta)


def classify_regime(
    delta: float, phi: float, weak_ratio_threshold: float = WEAK_RATIO_THRESHOLD
) -> Regime:
    """
    Classify a postselected measurement as weak, strong or intermediate.

    A measurement is weak if ``delta^2 >= weak_ratio_threshold * phi^2``. It is
    strong if ``|delta|`` is within 10% of ``phi`` around ``phi / 2``, the
    point at which the strong-measurement column of the summary table is
    evaluated.

    Examples
    --------
    >>> classify_regime(0.1, 0.001)
    <Regime.WEAK: 'weak'>
    >>> classify_regime(0.0005, 0.001)
    <Regime.STRONG: 'strong'>
    >>> classify_regime(0.005, 0.001)
    <Regime.INTERMEDIATE: 'intermediate'>
    """
    _check_delta(delta)
    _check_phi(phi)
    if delta * delta >= weak_ratio_threshold * phi * phi:
        return Regime.WEAK
    if abs(abs(delta) - phi / 2.0) <= STRONG_TOLERANCE * phi:
        return Regime.STRONG
    return Regime.INTERMEDIATE


@dataclasses.dataclass(frozen=True)
class PostselectionStats:
    """Postselection probability, amplification factor and regime."""

    prob: float
    amp_factor: float
    regime: Regime


def postselection_stats(
    delta: float,
    phi: float,
    mode: MeasurementMode = MeasurementMode.WEAK,
    weak_ratio_threshold: float = WEAK_RATIO_THRESHOLD,
) -> PostselectionStats:
    """
    Collect the postselection statistics of one configuration.

    Without postselection every photon is kept (``prob = 1``) and nothing is
    amplified (``amp_factor = 1``).
    """
    if MeasurementMode.parse(mode) is MeasurementMode.NO_POSTSELECTION:
        _check_delta(delta)
        _check_phi(phi)
        return PostselectionStats(1.0, 1.0, Regime.NO_POSTSELECTION)
    return PostselectionStats(
        prob=postselection_probability(delta, phi),
        amp_factor=amplification_factor(delta, phi),
        regime=classify_regime(delta, phi, weak_ratio_threshold),
    )


@dataclasses.dataclass(frozen=True)
class PhysicalParams:
    """
    Physical parameters of the optomechanical cavity.

    Parameters
    ----------
    omega_cav : float
        angular frequency of the optical mode in rad/s
    cavity_length : float
        cavity length in m
    mech_mass : float
        mass of the moving mirror in kg
    omega_m : float
        angular frequency of the mechanical oscillator in rad/s
    hbar : float
        reduced Planck constant in J s
    """

    omega_cav: float
    cavity_length: float
    mech_mass: float
    omega_m: float
    hbar: float = HBAR

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{field.name}={value} must be positive")


def g0_from_physical(params: PhysicalParams) -> float:
    """
    Single-photon radiation-pressure coupling ``g0`` in rad/s.

    ``g0 = (omega_cav / L) * sqrt(hbar / (2 omega_m M))``
    """
    return (params.omega_cav / params.cavity_length) * math.sqrt(
        params.hbar / (2.0 * params.omega_m * params.mech_mass)
    )


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name}={value} must be positive")


def mass_from_phi(
    phi_hat: float,
    omega_cav: float,
    cavity_length: float,
    omega_m: float,
    hbar: float = HBAR,
) -> float:
    """
    Mass of the moving mirror that corresponds to an estimate of ``phi``.

    Parameters
    ----------
    phi_hat : float
        estimate of ``phi = g0 / omega_m``
    omega_cav : float
        angular frequency of the optical mode in rad/s
    cavity_length : float
        cavity length in m
    omega_m : float
        mechanical angular frequency in rad/s

    Returns
    -------
    mass : float
        ``hbar omega_cav^2 / (2 L^2 omega_m^3 phi_hat^2)`` in kg
    """
    _check_positive(
        phi_hat=phi_hat,
        omega_cav=omega_cav,
        cavity_length=cavity_length,
        omega_m=omega_m,
    )
    return (
        hbar
        * omega_cav ** 2
        / (2.0 * cavity_length ** 2 * omega_m ** 3 * phi_hat ** 2)
    )


def frequency_from_phi(
    phi_hat: float,
    omega_cav: float,
    cavity_length: float,
    mech_mass: float,
    hbar: float = HBAR,
) -> float:
    """
    Mechanical angular frequency that corresponds to an estimate of ``phi``.

    Solves ``phi = (omega_cav / L) sqrt(hbar / (2 M)) omega_m^(-3/2)`` for
    ``omega_m``.
    """
    _check_positive(
        phi_hat=phi_hat,
        omega_cav=omega_cav,
        cavity_length=cavity_length,
        mech_mass=mech_mass,
    )
    scale = (omega_cav / cavity_length) * math.sqrt(hbar / (2.0 * mech_mass))
    return (scale / phi_hat) ** (2.0 / 3.0)


def mass_uncertainty(
    phi_hat: float,
    phi_std: float,
    omega_cav: float,
    cavity_length: float,
    omega_m: float,
    hbar: float = HBAR,
) -> float:
    """First order propagation of the spread of ``phi_hat`` onto the mass."""
    if phi_std < 0:
        raise DomainError(f"phi_std={phi_std} must be >= 0")
    mass = mass_from_phi(phi_hat, omega_cav, cavity_length, omega_m, hbar)
    return 2.0 * mass * phi_std / phi_hat


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """
    All physical and statistical parameters of one estimation run.

    Parameters
    ----------
    phi : float
        true scaled coupling ``g0 / omega_m``
    delta : float
        PDBS imbalance
    alpha_sq : float
        mean photon number of the classical beam
    m_photons : int
        number of injected single photons
    gamma_rate : float
        photon injection rate in 1/s
    tau_corr : float
        correlation time of the technical noise in s
    eta_sq : float
        strength of the technical noise
    noise_regime : NoiseRegime
    measurement_mode : MeasurementMode
    time_indexed_noise : bool
        let noise correlations decay with the injection slot distance instead
        of the distance between postselected data
    exact_sine : bool
        simulate the Gaussian data with mean ``sin(f phi)`` instead of
        ``f phi``
    """

    phi: float
    delta: float
    alpha_sq: float
    m_photons: int
    gamma_rate: float = 1e6
    tau_corr: float = 0.0
    eta_sq: float = 0.0
    noise_regime: NoiseRegime = NoiseRegime.WHITE
    measurement_mode: MeasurementMode = MeasurementMode.WEAK
    time_indexed_noise: bool = False
    exact_sine: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "noise_regime", NoiseRegime.parse(self.noise_regime))
        object.__setattr__(
            self, "measurement_mode", MeasurementMode.parse(self.measurement_mode)
        )
        _check_phi(self.phi)
        _check_delta(self.delta)
        if not (math.isfinite(self.alpha_sq) and self.alpha_sq > 0):
            raise DomainError(f"alpha_sq={self.alpha_sq} must be positive")
        if int(self.m_photons) != self.m_photons or self.m_photons < 1:
            raise DomainError(f"m_photons={self.m_photons} must be an integer >= 1")
        object.__setattr__(self, "m_photons", int(self.m_photons))
        if not (math.isfinite(self.gamma_rate) and self.gamma_rate > 0):
            raise DomainError(f"gamma_rate={self.gamma_rate} must be positive")
        if not (math.isfinite(self.tau_corr) and self.tau_corr >= 0):
            raise DomainError(f"tau_corr={self.tau_corr} must be >= 0")
        if not (math.isfinite(self.eta_sq) and self.eta_sq >= 0):
            raise DomainError(f"eta_sq={self.eta_sq} must be >= 0")
        if self.measurement_mode is not MeasurementMode.NO_POSTSELECTION:
            postselection_probability(self.delta, self.phi)
        if self.phi > PHI_WARNING:
            logger.warning(
                f"phi={self.phi} > {PHI_WARNING}: the small-angle formulas "
                "become inaccurate"
            )

    def replace(self, **changes: Any) -> "ExperimentConfig":
        """Get a validated copy with some fields changed."""
        return dataclasses.replace(self, **changes)

    @property
    def effective_eta_sq(self) -> float:
        """Technical noise strength, zero for purely quantum noise."""
        if self.noise_regime is NoiseRegime.PURELY_QUANTUM:
            return 0.0
        return self.eta_sq

    @property
    def rho(self) -> float:
        """Correlation between neighbouring noise values, ``exp(-1/(Gamma tau))``."""
        if self.tau_corr == 0.0:
            return 0.0
        return math.exp(-1.0 / (self.gamma_rate * self.tau_corr))

    @property
    def postselection(self) -> PostselectionStats:
        """Postselection statistics at the true ``phi``, trivial without one."""
        return postselection_stats(self.delta, self.phi, self.measurement_mode)

    @property
    def keep_probability(self) -> float:
        """Probability that an injected photon produces a datum."""
        return self.postselection.prob

    @property
    def calibration_factor(self) -> float:
        """
        Amplification factor the estimator divides by.

        It is ``1`` without postselection, the weak value for weak
        measurements and the full amplification factor at the true ``phi``
        for strong measurements.
        """
        if self.measurement_mode is MeasurementMode.NO_POSTSELECTION:
            return 1.0
        if self.measurement_mode is MeasurementMode.WEAK:
            return weak_value(self.delta)
        return amplification_factor(self.delta, self.phi)

    @property
    def signal_phase(self) -> float:
        """Reflection phase change ``f phi`` carried by every datum."""
        return self.calibration_factor * self.phi

    @property
    def expected_count(self) -> float:
        """Expected number of data ``P M``."""
        return self.keep_probability * self.m_photons


def resource_product(config: ExperimentConfig) -> float:
    """Total resources weighted by the noise strength, ``|alpha|^2 M eta^2``."""
    return config.alpha_sq * config.m_photons * config.effective_eta_sq


def postselection_beneficial(
    config: ExperimentConfig, threshold: float = WEAK_RATIO_THRESHOLD
) -> bool:
    """
    Check whether postselection increases the Fisher information.

    This is the case for correlated technical noise once
    ``|alpha|^2 M eta^2 >> 1``.
    """
    if config.noise_regime not in (NoiseRegime.COLORED, NoiseRegime.EXPONENTIAL):
        return False
    return resource_product(config) >= threshold
