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
Photocount statistics of the upper (Mach-Zehnder) interferometer.

A coherent beam ``|alpha>`` enters the upper interferometer and leaves it in
the product of two coherent states with amplitudes

    beta = -(i alpha / 2)(1 - exp(i theta)),
    gamma = -(alpha / 2)(1 + exp(i theta)).

The difference ``D`` of the counts of the balanced detectors is therefore the
difference of two independent Poisson variables, i.e. it follows a Skellam
distribution with intensities ``|beta|^2`` and ``|gamma|^2``. Its raw moments
are sums of products of Touchard polynomials, whose coefficients are the
Stirling numbers of the second kind.

With the reflection shift ``theta0 = pi`` and the phase shifter at
``Theta = -pi/2`` the total phase is ``theta = pi/2 + delta_theta`` and

    P_D(k) = exp(-|alpha|^2) ((1 + sin dt) / (1 - sin dt))^(k/2)
             I_|k|(|alpha|^2 |cos dt|).

For ``|alpha| >> 1`` the normalised difference ``D / |alpha|^2`` is close to
normal with mean ``delta_theta`` and variance ``1 / |alpha|^2``.

References
----------
.. [1] J. G. Skellam. The frequency distribution of the difference between
       two Poisson variates belonging to different populations. J. R. Stat.
       Soc. 109, 296 (1946).
.. [2] J. Touchard. Sur les cycles des substitutions. Acta Math. 70, 243
       (1939).
"""

# Core Library
import dataclasses
import functools
import logging
import math
from typing import Optional, Tuple, Union

# Third party
import numpy as np
from scipy import special

# First party
from wvapy.exceptions import DomainError, PreconditionError, RangeError
from wvapy.model import CONSTANTS

logger = logging.getLogger(__name__)

GAUSSIAN_THRESHOLD: float = CONSTANTS["gaussian_threshold"]
SUPPORT_SIGMAS: float = CONSTANTS["support_sigmas"]
MAX_STIRLING_ORDER: int = CONSTANTS["max_stirling_order"]
MAX_MOMENT_ORDER: int = CONSTANTS["max_moment_order"]

ArrayLike = Union[int, float, np.ndarray]


@dataclasses.dataclass(frozen=True)
class OutputAmplitudes:
    """Coherent amplitudes of the output ports A' and B'."""

    beta: complex
    gamma: complex
    theta: float


@dataclasses.dataclass(frozen=True)
class SkellamParams:
    """Poisson intensities of the two detectors."""

    mu_a: float
    mu_b: float

    def __post_init__(self) -> None:
        if not (self.mu_a >= 0 and self.mu_b >= 0):
            raise DomainError(
                f"Poisson intensities mu_a={self.mu_a}, mu_b={self.mu_b} "
                "must be >= 0"
            )

    @property
    def mean(self) -> float:
        return self.mu_a - self.mu_b

    @property
    def variance(self) -> float:
        return self.mu_a + self.mu_b


@dataclasses.dataclass(frozen=True)
class PhaseDecomposition:
    """Split of the total phase into reflection, signal and phase shifter."""

    delta_theta: float
    theta0: float = math.pi
    capital_theta: float = -math.pi / 2

    @property
    def theta(self) -> float:
        return self.theta0 + self.delta_theta + self.capital_theta


def interferometer_output(alpha: complex, theta: float) -> OutputAmplitudes:
    """
    Output amplitudes of the upper interferometer.

    Parameters
    ----------
    alpha : complex
        amplitude of the input coherent state
    theta : float
        total phase in rad

    Returns
    -------
    amplitudes : OutputAmplitudes

    Examples
    --------
    >>> out = interferometer_output(2.0, 0.0)
    >>> abs(out.beta), abs(out.gamma)
    (0.0, 2.0)
    """
    phase = complex(math.cos(theta), math.sin(theta))
    beta = -(1j * alpha / 2.0) * (1.0 - phase)
    gamma = -(alpha / 2.0) * (1.0 + phase)
    return OutputAmplitudes(beta=beta, gamma=gamma, theta=theta)


def _check_phase(alpha_sq: float, delta_theta: float) -> None:
    if not (math.isfinite(alpha_sq) and alpha_sq > 0):
        raise DomainError(f"alpha_sq={alpha_sq} must be positive")
    if not abs(delta_theta) < math.pi / 2:
        raise DomainError(f"delta_theta={delta_theta} must satisfy |dt| < pi/2")


def skellam_params(alpha_sq: float, delta_theta: float) -> SkellamParams:
    """
    Detector intensities for the standard phase decomposition.

    With ``theta = pi/2 + delta_theta`` the intensities are
    ``|alpha|^2 (1 +- sin delta_theta) / 2``.

    Examples
    --------
    >>> skellam_params(100.0, 0.0)
    SkellamParams(mu_a=50.0, mu_b=50.0)
    """
    _check_phase(alpha_sq, delta_theta)
    sine = math.sin(delta_theta)
    return SkellamParams(
        mu_a=alpha_sq * (1.0 + sine) / 2.0, mu_b=alpha_sq * (1.0 - sine) / 2.0
    )


@functools.lru_cache(maxsize=None)
def stirling2(r: int, m: int) -> int:
    """
    Stirling number of the second kind ``S(r, m)``.

    The number of ways to partition ``r`` labelled elements into ``m``
    non-empty blocks, computed exactly with the recurrence
    ``S(n+1, k) = k S(n, k) + S(n, k-1)``.

    Examples
    --------
    >>> stirling2(3, 2)
    3
    >>> stirling2(0, 0), stirling2(4, 0)
    (1, 0)
    """
    if not (0 <= m <= r <= MAX_STIRLING_ORDER):
        raise RangeError(
            f"stirling2 needs 0 <= m <= r <= {MAX_STIRLING_ORDER}, got r={r}, m={m}"
        )
    if r == m:
        return 1
    if m == 0:
        return 0
    return m * stirling2(r - 1, m) + stirling2(r - 1, m - 1)


def touchard(k: int, x: float) -> float:
    """
    Touchard polynomial ``T_k(x) = sum_m S(k, m) x^m``.

    ``T_k(mu)`` is the ``k``-th raw moment of a Poisson variable with mean
    ``mu``.

    Examples
    --------
    >>> touchard(2, 2.0)
    6.0
    >>> touchard(3, 1.0)
    5.0
    """
    if not (0 <= k <= MAX_STIRLING_ORDER):
        raise RangeError(f"touchard needs 0 <= k <= {MAX_STIRLING_ORDER}, got {k}")
    return math.fsum(stirling2(k, m) * x ** m for m in range(k + 1))


def moment_d(n: int, params: SkellamParams) -> float:
    """
    Raw moment ``<D^n>`` of the photocount difference.

    Parameters
    ----------
    n : int
        order of the moment, ``0 <= n <= 32``
    params : SkellamParams

    Returns
    -------
    moment : float
        ``sum_k C(n, k) (-1)^(n-k) T_k(mu_a) T_(n-k)(mu_b)``

    Examples
    --------
    >>> moment_d(2, SkellamParams(1.5, 0.5))
    3.0
    """
    if not (0 <= n <= MAX_MOMENT_ORDER):
        raise RangeError(f"moment_d needs 0 <= n <= {MAX_MOMENT_ORDER}, got {n}")
    return math.fsum(
        math.comb(n, k)
        * (-1) ** (n - k)
        * touchard(k, params.mu_a)
        * touchard(n - k, params.mu_b)
        for k in range(n + 1)
    )


def moment_generating_function(t: float, params: SkellamParams) -> float:
    """
    Moment generating function of ``D``.

    It factorises into the generating functions of the two Poisson counts,
    ``M_D(t) = M_A(t) M_B(-t) = exp(mu_a (e^t - 1) + mu_b (e^-t - 1))``.
    """
    return math.exp(params.mu_a * math.expm1(t) + params.mu_b * math.expm1(-t))


def log_bessel_i(order: ArrayLike, x: ArrayLike) -> np.ndarray:
    """
    Logarithm of the modified Bessel function of the first kind ``I_v(x)``.

    Evaluated through the exponentially scaled ``ive`` so that it neither
    overflows for large ``x`` nor loses precision. Orders so large that
    ``I_v(x)`` underflows give ``-inf``.
    """
    with np.errstate(divide="ignore"):
        return np.log(special.ive(order, x)) + x


def _as_output(value: np.ndarray, scalar: bool) -> Union[float, np.ndarray]:
    if scalar:
        return float(value)
    return value


def skellam_pmf(
    k: ArrayLike, alpha_sq: float, delta_theta: float
) -> Union[float, np.ndarray]:
    """
    Probability mass function of the photocount difference ``D``.

    Parameters
    ----------
    k : int or np.ndarray
        count difference(s)
    alpha_sq : float
        mean photon number of the classical beam
    delta_theta : float
        signal phase in rad, ``|delta_theta| < pi/2``

    Returns
    -------
    pmf : float or np.ndarray

    Examples
    --------
    >>> round(skellam_pmf(0, 1.0, 0.0), 6)
    0.46576
    """
    _check_phase(alpha_sq, delta_theta)
    scalar = np.ndim(k) == 0
    ks = np.asarray(k, dtype=float)
    sine = math.sin(delta_theta)
    log_ratio = math.log1p(sine) - math.log1p(-sine)
    log_pmf = (
        -alpha_sq
        + 0.5 * ks * log_ratio
        + log_bessel_i(np.abs(ks), alpha_sq * abs(math.cos(delta_theta)))
    )
    return _as_output(np.exp(log_pmf), scalar)


def skellam_pmf_generic(
    k: ArrayLike, mu_a: float, mu_b: float
) -> Union[float, np.ndarray]:
    """
    Skellam probability mass function for arbitrary intensities.

    ``exp(-(mu_a + mu_b)) (mu_a / mu_b)^(k/2) I_|k|(2 sqrt(mu_a mu_b))``
    """
    if not (mu_a > 0 and mu_b > 0):
        raise DomainError(f"mu_a={mu_a} and mu_b={mu_b} must be positive")
    scalar = np.ndim(k) == 0
    ks = np.asarray(k, dtype=float)
    log_pmf = (
        -(mu_a + mu_b)
        + 0.5 * ks * (math.log(mu_a) - math.log(mu_b))
        + log_bessel_i(np.abs(ks), 2.0 * math.sqrt(mu_a * mu_b))
    )
    return _as_output(np.exp(log_pmf), scalar)


def support(alpha_sq: float, delta_theta: float) -> Tuple[int, int]:
    """
    Range of ``k`` that carries all but a negligible part of the mass.

    The interval spans 20 standard deviations around the mean.
    """
    _check_phase(alpha_sq, delta_theta)
    mean = alpha_sq * math.sin(delta_theta)
    width = SUPPORT_SIGMAS * math.sqrt(alpha_sq)
    return math.floor(mean - width), math.ceil(mean + width)


def pmf_table(
    alpha_sq: float,
    delta_theta: float,
    k_min: Optional[int] = None,
    k_max: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tabulate the probability mass function on ``k_min..k_max``.

    Missing bounds default to the ``support``.

    Returns
    -------
    ks, probabilities : Tuple[np.ndarray, np.ndarray]
    """
    lower, upper = support(alpha_sq, delta_theta)
    k_min = lower if k_min is None else k_min
    k_max = upper if k_max is None else k_max
    if k_min > k_max:
        raise DomainError(f"Empty range k_min={k_min} > k_max={k_max}")
    ks = np.arange(k_min, k_max + 1)
    logger.debug(f"Tabulating {ks.size} PMF values on [{k_min}, {k_max}]")
    return ks, skellam_pmf(ks, alpha_sq, delta_theta)


def sample_d(
    rng: np.random.Generator,
    alpha_sq: float,
    delta_theta: float,
    size: Optional[int] = None,
) -> Union[int, np.ndarray]:
    """
    Draw the photocount difference ``X_A' - X_B'``.

    Both counts are drawn from numpy's exact Poisson generator.
    """
    params = skellam_params(alpha_sq, delta_theta)
    counts_a = rng.poisson(params.mu_a, size=size)
    counts_b = rng.poisson(params.mu_b, size=size)
    if size is None:
        return int(counts_a) - int(counts_b)
    return counts_a - counts_b


def sample_dtilde_gaussian(
    rng: np.random.Generator,
    alpha_sq: float,
    delta_theta: float,
    size: Optional[int] = None,
) -> Union[float, np.ndarray]:
    """
    Draw the normalised difference ``D / |alpha|^2`` in the Gaussian limit.

    Raises
    ------
    PreconditionError
        if ``alpha_sq`` is below the Gaussian threshold of 50 photons; use
        ``sample_d(...) / alpha_sq`` there
    """
    _check_phase(alpha_sq, delta_theta)
    if alpha_sq < GAUSSIAN_THRESHOLD:
        raise PreconditionError(
            f"alpha_sq={alpha_sq} is below the Gaussian threshold "
            f"{GAUSSIAN_THRESHOLD}, sample the exact difference instead"
        )
    return rng.normal(delta_theta, 1.0 / math.sqrt(alpha_sq), size=size)


def gaussian_pdf(x: ArrayLike, alpha_sq: float, delta_theta: float) -> np.ndarray:
    """Density of the normal approximation of ``D / |alpha|^2``."""
    _check_phase(alpha_sq, delta_theta)
    sigma = 1.0 / math.sqrt(alpha_sq)
    z = (np.asarray(x, dtype=float) - delta_theta) / sigma
    return np.exp(-0.5 * z * z) / (math.sqrt(2.0 * math.pi) * sigma)
