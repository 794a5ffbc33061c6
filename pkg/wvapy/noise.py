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
Covariance models of the technical noise.

Every datum is ``s_i = D~_i + eta_i`` where the quantum part ``D~_i`` has
variance ``1/|alpha|^2`` and the technical noise ``eta_i`` is a zero-mean
Gaussian sequence with

    <eta_i eta_j> = eta^2 exp(-|i - j| / (Gamma tau)) = eta^2 rho^|i - j|.

Colored noise is the limit ``rho -> 1`` (a constant covariance), white noise
the limit ``rho = 0`` and purely quantum noise has ``eta = 0``. The white
and colored inverses are known in closed form, the general exponential model
is inverted through a Cholesky factorisation. Sums over the inverse of
evenly spaced exponential data use Levinson recursion on the Toeplitz
covariance.

References
----------
.. [1] A. Feizpour, X. Xing and A. M. Steinberg. Amplifying single-photon
       nonlinearity using weak measurements. Phys. Rev. Lett. 107, 133603
       (2011).
"""

# Core Library
import dataclasses
import logging
import math
from typing import Optional, Sequence, Union

# Third party
import numpy as np
from scipy import linalg, signal

# First party
from wvapy.exceptions import DimensionError, DomainError, SingularCovarianceError
from wvapy.model import CONSTANTS, ExperimentConfig, NoiseRegime

logger = logging.getLogger(__name__)

MAX_TOEPLITZ_SIZE: int = CONSTANTS["max_toeplitz_size"]

Slots = Optional[Union[Sequence[float], np.ndarray]]


@dataclasses.dataclass(frozen=True)
class NoiseModel:
    """
    Covariance parameters of the technical noise.

    Parameters
    ----------
    kind : NoiseRegime
    eta_sq : float
        noise strength
    alpha_sq : float
        mean photon number, sets the quantum variance ``1/alpha_sq``
    rho : float
        correlation of neighbouring noise values (exponential kind only)
    """

    kind: NoiseRegime
    eta_sq: float
    alpha_sq: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", NoiseRegime.parse(self.kind))
        if not (math.isfinite(self.eta_sq) and self.eta_sq >= 0):
            raise DomainError(f"eta_sq={self.eta_sq} must be >= 0")
        if not (math.isfinite(self.alpha_sq) and self.alpha_sq > 0):
            raise DomainError(f"alpha_sq={self.alpha_sq} must be positive")
        if not 0.0 <= self.rho < 1.0:
            raise DomainError(f"rho={self.rho} must be in [0, 1)")

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "NoiseModel":
        return cls(
            kind=config.noise_regime,
            eta_sq=config.eta_sq,
            alpha_sq=config.alpha_sq,
            rho=config.rho,
        )

    @property
    def effective_eta_sq(self) -> float:
        if self.kind is NoiseRegime.PURELY_QUANTUM:
            return 0.0
        return self.eta_sq


@dataclasses.dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric covariance (or inverse covariance) of ``n`` data."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def total(self) -> float:
        """Sum over all entries."""
        return float(self.entries.sum())

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


def _positions(n: int, slots: Slots) -> np.ndarray:
    if n < 1:
        raise DomainError(f"n={n} must be >= 1")
    if slots is None:
        return np.arange(n, dtype=float)
    positions = np.asarray(slots, dtype=float)
    if positions.shape != (n,):
        raise DimensionError(f"Got {positions.size} slots for n={n} data")
    if n > 1 and np.any(np.diff(positions) <= 0):
        raise DomainError("slots must be strictly increasing")
    return positions


def _noise_part(n: int, model: NoiseModel, slots: Slots) -> np.ndarray:
    positions = _positions(n, slots)
    eta_sq = model.effective_eta_sq
    if model.kind is NoiseRegime.COLORED:
        return np.full((n, n), eta_sq)
    if model.kind is NoiseRegime.EXPONENTIAL:
        lags = np.abs(positions[:, None] - positions[None, :])
        return eta_sq * np.power(model.rho, lags)
    return eta_sq * np.eye(n)


def covariance(n: int, model: NoiseModel, slots: Slots = None) -> CovarianceMatrix:
    """
    Covariance matrix of ``n`` data.

    Parameters
    ----------
    n : int
        number of data
    model : NoiseModel
    slots : sequence of float, optional
        injection slots of the data; if given, exponential correlations decay
        with the slot distance instead of the data index distance

    Returns
    -------
    covariance : CovarianceMatrix
        ``C_ij = delta_ij / alpha_sq + <eta_i eta_j>``

    Examples
    --------
    >>> model = NoiseModel(NoiseRegime.COLORED, eta_sq=0.05, alpha_sq=100.0)
    >>> covariance(2, model).entries.round(12).tolist()
    [[0.06, 0.05], [0.05, 0.06]]
    """
    return CovarianceMatrix(np.eye(n) / model.alpha_sq + _noise_part(n, model, slots))


def inverse_covariance(
    n: int, model: NoiseModel, slots: Slots = None
) -> CovarianceMatrix:
    """
    Inverse of the covariance matrix.

    White and purely quantum noise have the diagonal inverse
    ``alpha^2 / (1 + alpha^2 eta^2)``, colored noise the rank-one downdate
    ``alpha^2 I - eta^2 alpha^4 / (1 + n eta^2 alpha^2)``. The exponential
    model is inverted numerically.
    """
    _positions(n, slots)
    alpha_sq = model.alpha_sq
    eta_sq = model.effective_eta_sq
    if model.kind in (NoiseRegime.WHITE, NoiseRegime.PURELY_QUANTUM):
        return CovarianceMatrix(np.eye(n) * alpha_sq / (1.0 + alpha_sq * eta_sq))
    if model.kind is NoiseRegime.COLORED:
        downdate = eta_sq * alpha_sq ** 2 / (1.0 + n * eta_sq * alpha_sq)
        return CovarianceMatrix(alpha_sq * np.eye(n) - downdate)
    factor = _cholesky(covariance(n, model, slots))
    inverse = linalg.cho_solve(factor, np.eye(n))
    return CovarianceMatrix(0.5 * (inverse + inverse.T))


def _cholesky(cov: CovarianceMatrix):
    try:
        return linalg.cho_factor(cov.entries, lower=True)
    except linalg.LinAlgError as exc:
        raise SingularCovarianceError(
            f"Covariance of {cov.n} data is not positive definite"
        ) from exc


def _evenly_spaced(positions: np.ndarray) -> bool:
    if positions.size < 3:
        return True
    gaps = np.diff(positions)
    return bool(np.allclose(gaps, gaps[0], rtol=1e-12, atol=0.0))


def inverse_row_sums(n: int, model: NoiseModel, slots: Slots = None) -> np.ndarray:
    """
    Row sums ``C^-1 1`` of the inverse covariance.

    White, purely quantum and colored noise have constant row sums. The
    exponential covariance of evenly spaced data is a symmetric Toeplitz
    matrix and is solved by Levinson recursion without forming ``C``; other
    slots go through a Cholesky factorisation.

    Raises
    ------
    DomainError
        if an exponential Toeplitz system has more than ``MAX_TOEPLITZ_SIZE``
        data

    Examples
    --------
    >>> model = NoiseModel(NoiseRegime.COLORED, eta_sq=0.05, alpha_sq=100.0)
    >>> inverse_row_sums(2, model).round(12).tolist()
    [9.090909090909, 9.090909090909]
    """
    positions = _positions(n, slots)
    alpha_sq = model.alpha_sq
    eta_sq = model.effective_eta_sq
    if model.kind in (NoiseRegime.WHITE, NoiseRegime.PURELY_QUANTUM):
        return np.full(n, alpha_sq / (1.0 + alpha_sq * eta_sq))
    if model.kind is NoiseRegime.COLORED:
        return np.full(n, alpha_sq / (1.0 + n * eta_sq * alpha_sq))
    ones = np.ones(n)
    if not _evenly_spaced(positions):
        return linalg.cho_solve(_cholesky(covariance(n, model, slots)), ones)
    if n > MAX_TOEPLITZ_SIZE:
        raise DomainError(
            f"{n} correlated data exceed the limit of {MAX_TOEPLITZ_SIZE} for "
            "exponential noise, lower m_photons or use colored noise"
        )
    lags = positions - positions[0]
    column = eta_sq * np.power(model.rho, lags)
    column[0] += 1.0 / alpha_sq
    try:
        sums = linalg.solve_toeplitz(column, ones)
    except linalg.LinAlgError as exc:
        raise SingularCovarianceError(
            f"Covariance of {n} data is not positive definite"
        ) from exc
    logger.debug(f"Levinson solve of {n} exponentially correlated data")
    return sums


def log_determinant(n: int, model: NoiseModel, slots: Slots = None) -> float:
    """Natural logarithm of ``det C``."""
    _positions(n, slots)
    quantum = 1.0 / model.alpha_sq
    eta_sq = model.effective_eta_sq
    if model.kind in (NoiseRegime.WHITE, NoiseRegime.PURELY_QUANTUM):
        return n * math.log(quantum + eta_sq)
    if model.kind is NoiseRegime.COLORED:
        # matrix determinant lemma
        return n * math.log(quantum) + math.log1p(n * eta_sq * model.alpha_sq)
    lower, _ = _cholesky(covariance(n, model, slots))
    return 2.0 * float(np.sum(np.log(np.diag(lower))))


def sample_noise(
    rng: np.random.Generator,
    n: int,
    model: NoiseModel,
    slots: Slots = None,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    Draw a path of technical noise.

    Colored noise is one shared offset per path, white noise is i.i.d. and the
    exponential model is the stationary AR(1) sequence
    ``eta_(i+1) = rho eta_i + sqrt(1 - rho^2) eta xi_i``. With ``slots`` the
    step correlation becomes ``rho^(slot gap)``.

    Parameters
    ----------
    rng : np.random.Generator
    n : int
        path length
    model : NoiseModel
    slots : sequence of float, optional
    size : int, optional
        number of independent paths

    Returns
    -------
    eta : np.ndarray
        shape ``(n,)`` or ``(size, n)``
    """
    positions = _positions(n, slots)
    shape = (n,) if size is None else (size, n)
    eta = math.sqrt(model.effective_eta_sq)
    if eta == 0.0:
        return np.zeros(shape)
    if model.kind is NoiseRegime.WHITE:
        return rng.normal(0.0, eta, size=shape)
    if model.kind is NoiseRegime.COLORED:
        offset = rng.normal(0.0, eta, size=shape[:-1] + (1,))
        return np.broadcast_to(offset, shape).copy()

    innovations = rng.normal(0.0, 1.0, size=shape)
    if slots is None:
        rho = model.rho
        innovations[..., 1:] *= math.sqrt(1.0 - rho * rho)
        return eta * signal.lfilter([1.0], [1.0, -rho], innovations, axis=-1)

    step = np.power(model.rho, np.diff(positions))
    path = np.empty(shape)
    path[..., 0] = innovations[..., 0]
    for i in range(1, n):
        path[..., i] = step[i - 1] * path[..., i - 1] + math.sqrt(
            1.0 - step[i - 1] ** 2
        ) * innovations[..., i]
    return eta * path
