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
Monte-Carlo simulation of the two-interferometer experiment.

One trial is a complete experiment: ``M`` single photons are injected, each
is postselected with probability ``P`` and every postselected photon
triggers a phase measurement of the classical beam. The technical noise is
correlated across the data of one trial and independent between trials.

Trials draw from independent random streams derived from a master seed, so a
run is reproducible independently of how the trials are scheduled.
"""

# Core Library
import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

# Third party
import numpy as np

# First party
from wvapy.exceptions import (
    AllTrialsFailedError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    ZeroPostselectionsError,
)
from wvapy.inference import (
    DataSet,
    FisherReport,
    draw_samples,
    fisher_analytic,
    fisher_numeric,
    mle_estimate,
)
from wvapy.model import (
    ExperimentConfig,
    MeasurementMode,
    NoiseRegime,
    Regime,
    classify_regime,
)

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64

Result = TypeVar("Result")


@dataclasses.dataclass(frozen=True)
class TrialRecord:
    trial: int
    n_postselected: int
    phi_hat: float


@dataclasses.dataclass(frozen=True)
class TrialSummary:
    """
    Statistics of the estimator over repeated experiments.

    Parameters
    ----------
    n_trials : int
        number of trials run, failed ones included
    mean_estimate : float
    var_estimate : float
        unbiased sample variance of the estimates
    efficiency : float
        ``var_estimate`` times the Fisher information of the simulated data,
        1 for an efficient estimator
    snr_empirical : float
        ``mean_estimate / sqrt(var_estimate)``
    mean_postselected : float
        average number of data per trial
    failed_trials : int
        trials without a single postselected photon
    analytic_fisher : float
        regime value of the Fisher information
    data_law_fisher : float
        Fisher information of the simulated data
    snr_analytic : float
        ``phi sqrt(analytic_fisher)``
    records : Tuple[TrialRecord, ...]
        per-trial results, only kept on request
    """

    n_trials: int
    mean_estimate: float
    var_estimate: float
    efficiency: float
    snr_empirical: float
    mean_postselected: float
    failed_trials: int
    analytic_fisher: float
    data_law_fisher: float
    snr_analytic: float
    records: Tuple[TrialRecord, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_trials": self.n_trials,
            "mean": self.mean_estimate,
            "var": self.var_estimate,
            "efficiency": self.efficiency,
            "snr": self.snr_empirical,
            "snr_analytic": self.snr_analytic,
            "analytic_fisher": self.analytic_fisher,
            "data_law_fisher": self.data_law_fisher,
            "mean_postselected": self.mean_postselected,
            "failed": self.failed_trials,
        }


@dataclasses.dataclass(frozen=True, eq=False)
class SweepResult:
    """
    Fisher information curves over one swept parameter.

    ``fisher_analytic`` maps a curve label to its values on ``axis``.
    ``asymptotes`` holds the large-``M`` limit of every curve.
    """

    axis_name: str
    axis: np.ndarray
    fisher_analytic: Dict[str, np.ndarray]
    fisher_numeric: Optional[np.ndarray] = None
    numeric_se: Optional[np.ndarray] = None
    asymptotes: Dict[str, float] = dataclasses.field(default_factory=dict)
    post_probs: Tuple[float, ...] = ()

    def __post_init__(self) -> None:
        lengths = {len(curve) for curve in self.fisher_analytic.values()}
        for optional in (self.fisher_numeric, self.numeric_se):
            if optional is not None:
                lengths.add(len(optional))
        if lengths - {len(self.axis)}:
            raise DimensionError(
                f"All curves need {len(self.axis)} values, got lengths {lengths}"
            )

    @property
    def labels(self) -> List[str]:
        return list(self.fisher_analytic)


@dataclasses.dataclass(frozen=True)
class Table1Report:
    """Analytic Fisher information per noise model and measurement type."""

    alpha_sq: float
    m_photons: int
    eta_sq: float
    delta_weak: float
    phi: float
    entries: Dict[NoiseRegime, Dict[MeasurementMode, float]]

    def rows(self) -> List[Tuple[str, float, float, float]]:
        return [
            (
                noise.value,
                cells[MeasurementMode.NO_POSTSELECTION],
                cells[MeasurementMode.WEAK],
                cells[MeasurementMode.STRONG],
            )
            for noise, cells in self.entries.items()
        ]

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {
            noise.value: {mode.value: value for mode, value in cells.items()}
            for noise, cells in self.entries.items()
        }


def _check_seed(seed: int) -> None:
    if not 0 <= seed < MAX_SEED:
        raise DomainError(f"seed={seed} must be an unsigned 64-bit integer")


def derive_stream(seed: int, index: int) -> np.random.Generator:
    """
    Random stream of trial ``index`` under the master ``seed``.

    The pair is hashed by :class:`numpy.random.SeedSequence`, so streams of
    different trials are independent and do not depend on execution order.
    """
    _check_seed(seed)
    if index < 0:
        raise DomainError(f"index={index} must be >= 0")
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def run_experiment(config: ExperimentConfig, rng: np.random.Generator) -> DataSet:
    """
    Simulate one experiment of ``M`` injected photons.

    The number of postselected photons is binomial and the postselected
    injection slots are a uniform subset of all slots, which is the same in
    law as deciding photon by photon.

    Raises
    ------
    ZeroPostselectionsError
        if no photon was postselected
    """
    m_photons = config.m_photons
    if config.measurement_mode is MeasurementMode.NO_POSTSELECTION:
        slots = np.arange(m_photons)
    else:
        n = int(rng.binomial(m_photons, config.keep_probability))
        if n == 0:
            raise ZeroPostselectionsError(
                f"None of the {m_photons} photons was postselected"
            )
        slots = np.sort(rng.choice(m_photons, size=n, replace=False))
    samples = draw_samples(rng, config, slots.size, slots)
    return DataSet(samples, config, slots)


def _run_trial(config: ExperimentConfig, seed: int, index: int) -> TrialRecord:
    rng = derive_stream(seed, index)
    try:
        data = run_experiment(config, rng)
    except ZeroPostselectionsError:
        return TrialRecord(index, 0, math.nan)
    return TrialRecord(index, data.n, mle_estimate(data))


def _map_indices(
    func: Callable[[int], Result], count: int, n_threads: int
) -> List[Result]:
    """Apply ``func`` to ``0 .. count - 1`` in order, on a pool unless serial."""
    if n_threads == 1:
        return [func(index) for index in range(count)]
    with ThreadPoolExecutor(max_workers=n_threads or None) as executor:
        return list(executor.map(func, range(count)))


def run_trials(
    config: ExperimentConfig,
    n_trials: int,
    seed: int = 0,
    n_threads: int = 1,
    keep_records: bool = False,
) -> TrialSummary:
    """
    Repeat the experiment and summarise the estimates.

    Parameters
    ----------
    config : ExperimentConfig
    n_trials : int
        at least 2
    seed : int
        master seed
    n_threads : int
        worker threads, 0 picks the executor default
    keep_records : bool
        keep the per-trial results in the summary

    Returns
    -------
    summary : TrialSummary

    Raises
    ------
    AllTrialsFailedError
        if no trial postselected a single photon
    """
    if n_trials < 2:
        raise DomainError(f"n_trials={n_trials} must be >= 2")
    if n_threads < 0:
        raise DomainError(f"n_threads={n_threads} must be >= 0")
    _check_seed(seed)

    records = _map_indices(
        lambda index: _run_trial(config, seed, index), n_trials, n_threads
    )

    estimates = [r.phi_hat for r in records if r.n_postselected > 0]
    failed = n_trials - len(estimates)
    if not estimates:
        raise AllTrialsFailedError(f"All {n_trials} trials had zero postselections")
    if failed:
        logger.warning(f"Dropped {failed} of {n_trials} trials without data")

    mean = math.fsum(estimates) / len(estimates)
    if len(estimates) > 1:
        var = math.fsum((x - mean) ** 2 for x in estimates) / (len(estimates) - 1)
    else:
        logger.warning("Only one trial succeeded, the variance is set to 0")
        var = 0.0

    try:
        report = fisher_analytic(config)
        analytic, data_law = report.analytic, report.data_law
    except DegenerateInputError as exc:
        logger.warning(f"No analytic Fisher information: {exc}")
        analytic = data_law = math.nan

    summary = TrialSummary(
        n_trials=n_trials,
        mean_estimate=mean,
        var_estimate=var,
        efficiency=var * data_law,
        snr_empirical=mean / math.sqrt(var) if var > 0 else math.nan,
        mean_postselected=math.fsum(r.n_postselected for r in records) / n_trials,
        failed_trials=failed,
        analytic_fisher=analytic,
        data_law_fisher=data_law,
        snr_analytic=config.phi * math.sqrt(analytic),
        records=tuple(records) if keep_records else (),
    )
    logger.info(
        f"{n_trials} trials: mean={summary.mean_estimate:.6g}, "
        f"efficiency={summary.efficiency:.4g}"
    )
    return summary


def _check_axis(values: Sequence[float], name: str) -> np.ndarray:
    axis = np.asarray(values, dtype=float)
    if axis.ndim != 1 or axis.size == 0:
        raise DomainError(f"{name} must be a non-empty vector")
    return axis


def sweep_postselection(
    base: ExperimentConfig,
    delta_values: Sequence[float],
    numeric: bool = False,
    n_datasets: int = 10_000,
    seed: int = 0,
    n_threads: int = 1,
) -> SweepResult:
    """
    Weak-measurement Fisher information against the postselection probability.

    The axis is ``P = delta^2``. The curve ``no_postselection`` is the
    constant reference without postselection. With ``numeric`` the weak curve
    is also estimated by Monte-Carlo, one derived stream per point, and the
    curve ``data_law`` holds the value the estimates converge to. The points
    fan out over ``n_threads`` workers without changing the result.
    """
    deltas = _check_axis(delta_values, "delta_values")
    if n_threads < 0:
        raise DomainError(f"n_threads={n_threads} must be >= 0")
    weak_base = base.replace(measurement_mode=MeasurementMode.WEAK)
    reference = fisher_analytic(
        base.replace(measurement_mode=MeasurementMode.NO_POSTSELECTION)
    ).analytic
    if numeric:
        logger.warning(
            f"Numeric sweep with {n_datasets} datasets per point, this is slow"
        )

    configs = []
    for delta in deltas:
        config = weak_base.replace(delta=float(delta))
        if classify_regime(config.delta, config.phi) is not Regime.WEAK:
            logger.warning(f"delta={delta:g} is outside of the weak regime")
        configs.append(config)

    def evaluate(index: int) -> FisherReport:
        if numeric:
            rng = derive_stream(seed, index)
            return fisher_numeric(configs[index], n_datasets, rng)
        return fisher_analytic(configs[index])

    reports = _map_indices(evaluate, len(configs), n_threads if numeric else 1)
    curves = {
        "weak": np.array([r.analytic for r in reports]),
        "no_postselection": np.full(deltas.size, reference),
    }
    if numeric:
        curves["data_law"] = np.array([r.data_law for r in reports])
    return SweepResult(
        axis_name="postselection_probability",
        axis=deltas ** 2,
        fisher_analytic=curves,
        fisher_numeric=np.array([r.numeric for r in reports]) if numeric else None,
        numeric_se=np.array([r.numeric_se for r in reports]) if numeric else None,
    )


def asymptote(config: ExperimentConfig) -> float:
    """
    Fisher information of ``config`` for ``M -> infinity``.

    Only fully correlated noise saturates: at ``1 / eta^2`` without
    postselection and at ``1 / (4 delta^2 eta^2)`` for weak measurements.
    """
    eta_sq = config.effective_eta_sq
    if config.noise_regime is not NoiseRegime.COLORED or eta_sq == 0.0:
        return math.inf
    if config.measurement_mode is MeasurementMode.NO_POSTSELECTION:
        return 1.0 / eta_sq
    if config.measurement_mode is MeasurementMode.WEAK:
        return 1.0 / (4.0 * config.delta ** 2 * eta_sq)
    return config.calibration_factor ** 2 / eta_sq


def _curve(configs: Sequence[ExperimentConfig]) -> np.ndarray:
    values = np.empty(len(configs))
    for index, config in enumerate(configs):
        try:
            values[index] = fisher_analytic(config).analytic
        except DegenerateInputError:
            logger.debug(f"m_photons={config.m_photons} expects no data")
            values[index] = math.nan
    return values


def sweep_photons(
    base: ExperimentConfig,
    m_values: Sequence[int],
    post_probs: Sequence[float],
) -> SweepResult:
    """
    Fisher information against the number of injected photons.

    Every postselection probability ``p`` gives a weak-measurement curve
    with ``delta = sqrt(p)``, labelled ``p1``, ``p2``, ... in the order of
    ``post_probs``. The curve ``nops`` is the one without postselection.
    Points with less than one expected datum are NaN.
    """
    ms = _check_axis(m_values, "m_values")
    if np.any(ms < 1) or np.any(ms != np.round(ms)):
        raise DomainError("m_values must be integers >= 1")
    probs = _check_axis(post_probs, "post_probs")
    if np.any(probs <= 0) or np.any(probs > 0.5):
        raise DomainError("post_probs must lie in (0, 0.5]")

    curves: Dict[str, np.ndarray] = {}
    asymptotes: Dict[str, float] = {}
    for number, prob in enumerate(probs, start=1):
        weak = base.replace(
            delta=math.sqrt(prob), measurement_mode=MeasurementMode.WEAK
        )
        curves[f"p{number}"] = _curve([weak.replace(m_photons=int(m)) for m in ms])
        asymptotes[f"p{number}"] = asymptote(weak)
    nops = base.replace(measurement_mode=MeasurementMode.NO_POSTSELECTION)
    curves["nops"] = _curve([nops.replace(m_photons=int(m)) for m in ms])
    asymptotes["nops"] = asymptote(nops)
    if any(np.isnan(curve).any() for curve in curves.values()):
        logger.warning("Some photon numbers expect no postselected data")

    return SweepResult(
        axis_name="m_photons",
        axis=ms,
        fisher_analytic=curves,
        asymptotes=asymptotes,
        post_probs=tuple(float(p) for p in probs),
    )


def _saturated(factor_sq: float, eta_sq: float) -> float:
    return factor_sq / eta_sq if eta_sq > 0 else math.inf


def table1(
    alpha_sq: float,
    m_photons: int,
    eta_sq: float,
    delta_weak: float,
    phi: float,
) -> Table1Report:
    """
    Closed-form Fisher information for every noise model and measurement.

    The strong measurement is evaluated at ``delta = phi / 2`` and the
    colored row is the large ``|alpha|^2 M`` limit.

    Examples
    --------
    >>> report = table1(100.0, 1000, 0.05, 0.1, 0.02)
    >>> report.entries[NoiseRegime.PURELY_QUANTUM][MeasurementMode.WEAK]
    25000.0
    """
    if phi <= 0 or delta_weak == 0:
        raise DomainError("table1 needs phi > 0 and delta_weak != 0")
    # validates all parameters, both measurement points included
    ExperimentConfig(phi, delta_weak, alpha_sq, m_photons, eta_sq=eta_sq)
    ExperimentConfig(phi, phi / 2.0, alpha_sq, m_photons, eta_sq=eta_sq)

    weights = {
        MeasurementMode.NO_POSTSELECTION: 1.0,
        MeasurementMode.WEAK: 1.0 / 4.0,
        MeasurementMode.STRONG: 1.0 / 8.0,
    }
    white = alpha_sq * m_photons / (1.0 + alpha_sq * eta_sq)
    quantum = alpha_sq * m_photons
    entries = {
        NoiseRegime.WHITE: {mode: white * w for mode, w in weights.items()},
        NoiseRegime.PURELY_QUANTUM: {mode: quantum * w for mode, w in weights.items()},
        NoiseRegime.COLORED: {
            MeasurementMode.NO_POSTSELECTION: _saturated(1.0, eta_sq),
            MeasurementMode.WEAK: _saturated(1.0 / (4.0 * delta_weak ** 2), eta_sq),
            MeasurementMode.STRONG: _saturated(1.0 / (4.0 * phi ** 2), eta_sq),
        },
    }
    return Table1Report(alpha_sq, m_photons, eta_sq, delta_weak, phi, entries)
