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
Command line interface of wvapy.

Every subcommand builds its run configuration from the defaults, ``--preset``,
a flat JSON ``--config`` file and the parameter flags (see
:func:`load_run_config`) and writes CSV, JSON or, for ``table1``, aligned
text to standard output or ``--out``. Diagnostics go to standard error; their
level is set by the environment variable ``WVA_LOG`` (``error``, ``warn``,
``info`` or ``debug``).

Exit codes: 0 on success, 2 for invalid configurations and parameters, 3
for degenerate statistical runs such as an experiment that expects no
postselected photon.
"""

# Core Library
import argparse
import contextlib
import csv
import dataclasses
import json
import logging
import math
import os
import sys
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO

# Third party
import numpy as np

# First party
import wvapy
from wvapy.exceptions import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    SingularCovarianceError,
)
from wvapy.inference import fisher_analytic, fisher_numeric
from wvapy.model import ExperimentConfig
from wvapy.photostats import pmf_table
from wvapy.presets import PRESET_NAMES, get_preset
from wvapy.simulator import (
    derive_stream,
    run_trials,
    sweep_photons,
    sweep_postselection,
    table1,
)

logger = logging.getLogger(__name__)

LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

_FLOAT_KEYS = ("phi", "delta", "alpha_sq", "gamma_rate", "tau_corr", "eta_sq")
_INT_KEYS = ("m_photons", "seed", "trials")
_STR_KEYS = ("noise", "measurement")
_BOOL_KEYS = ("time_indexed_noise", "exact_sine")
RUN_CONFIG_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS + _BOOL_KEYS

DEFAULT_RUN_CONFIG: Dict[str, Any] = {
    **get_preset("sweep-p"),
    "seed": 0,
    "trials": 1000,
    "time_indexed_noise": False,
    "exact_sine": False,
}


@dataclasses.dataclass(frozen=True)
class RunConfigFile:
    """A parsed run configuration."""

    experiment: ExperimentConfig
    seed: int
    trials: int


def _check_values(values: Dict[str, Any], source: str) -> None:
    for key, value in values.items():
        if key not in RUN_CONFIG_KEYS:
            raise ConfigError(f"Unknown key '{key}' in {source}")
        if key in _BOOL_KEYS:
            valid = isinstance(value, bool)
        elif key in _STR_KEYS:
            valid = isinstance(value, str)
        elif key in _INT_KEYS:
            valid = isinstance(value, int) and not isinstance(value, bool)
        else:
            valid = isinstance(value, (int, float)) and not isinstance(value, bool)
        if not valid:
            raise ConfigError(f"Malformed value {value!r} for key '{key}' in {source}")


def read_config_file(path: str) -> Dict[str, Any]:
    """Read and check the keys of a JSON run configuration file."""
    try:
        with open(path) as f:
            values = json.load(f)
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration '{path}': {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Configuration '{path}' is not valid JSON: {exc}") from exc
    if not isinstance(values, dict):
        raise ConfigError(f"Configuration '{path}' must be a JSON object")
    _check_values(values, f"'{path}'")
    return values


def load_run_config(
    path: Optional[str] = None,
    preset: Optional[str] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfigFile:
    """
    Build a run configuration from defaults, a preset, a file and overrides.

    Later sources win. Missing keys take the defaults ``seed=0``,
    ``trials=1000`` and the parameters of the ``sweep-p`` preset.

    Parameters
    ----------
    path : str, optional
        JSON file with a flat object
    preset : str, optional
        name of a preset
    overrides : Dict[str, Any], optional
        values of command line flags, ``None`` values are ignored

    Returns
    -------
    run_config : RunConfigFile

    Raises
    ------
    ConfigError
        for unknown keys, malformed values and unreadable files
    """
    values = dict(DEFAULT_RUN_CONFIG)
    if preset is not None:
        values.update(get_preset(preset))
    if path is not None:
        values.update(read_config_file(path))
    if overrides:
        given = {key: value for key, value in overrides.items() if value is not None}
        _check_values(given, "the command line")
        values.update(given)

    experiment = ExperimentConfig(
        phi=float(values["phi"]),
        delta=float(values["delta"]),
        alpha_sq=float(values["alpha_sq"]),
        m_photons=values["m_photons"],
        gamma_rate=float(values["gamma_rate"]),
        tau_corr=float(values["tau_corr"]),
        eta_sq=float(values["eta_sq"]),
        noise_regime=values["noise"],
        measurement_mode=values["measurement"],
        time_indexed_noise=values["time_indexed_noise"],
        exact_sine=values["exact_sine"],
    )
    return RunConfigFile(experiment, seed=values["seed"], trials=values["trials"])


def _format_float(value: float) -> str:
    return format(float(value), ".17g")


def _json_ready(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _json_ready(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(item) for item in value]
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


@contextlib.contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="") as f:
        yield f


def _write_json(stream: TextIO, value: Any) -> None:
    json.dump(_json_ready(value), stream, indent=2)
    stream.write("\n")


def _write_csv(stream: TextIO, header: Sequence[str], rows: List[List[str]]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "phi": args.phi,
        "delta": args.delta,
        "alpha_sq": args.alpha_sq,
        "m_photons": args.m_photons,
        "gamma_rate": args.gamma_rate,
        "tau_corr": args.tau_corr,
        "eta_sq": args.eta_sq,
        "noise": args.noise,
        "measurement": args.measurement,
        "seed": args.seed,
        "trials": getattr(args, "trials", None),
    }


def _run_config(args: argparse.Namespace) -> RunConfigFile:
    if args.format == "text" and args.command != "table1":
        raise ConfigError("--format text is only supported by table1")
    return load_run_config(args.config, args.preset, _overrides(args))


def cmd_pmf(args: argparse.Namespace) -> int:
    """Tabulate the photocount-difference distribution."""
    run = _run_config(args)
    ks, probs = pmf_table(
        run.experiment.alpha_sq, args.delta_theta, args.kmin, args.kmax
    )
    with _output(args.out) as stream:
        if args.format == "json":
            _write_json(
                stream,
                [{"k": int(k), "pmf": float(p)} for k, p in zip(ks, probs)],
            )
        else:
            _write_csv(
                stream, ["k", "pmf"], [[str(k), f"{p:.16e}"] for k, p in zip(ks, probs)]
            )
    return 0


def cmd_fisher(args: argparse.Namespace) -> int:
    """Report the Fisher information of the configured experiment."""
    run = _run_config(args)
    if args.mode == "analytic":
        report = fisher_analytic(run.experiment)
    else:
        report = fisher_numeric(
            run.experiment, args.datasets, derive_stream(run.seed, 0)
        )
    values = report.to_dict()
    if args.mode == "numeric":
        values.pop("analytic")
    with _output(args.out) as stream:
        if args.format == "json":
            _write_json(stream, values)
        else:
            _write_csv(
                stream,
                list(values),
                [
                    [
                        _format_float(v) if isinstance(v, float) else str(v)
                        for v in values.values()
                    ]
                ],
            )
    return 0


def _summary_path(args: argparse.Namespace) -> Optional[str]:
    if args.summary is not None:
        return args.summary
    if args.out is not None and args.out != "-":
        return f"{args.out}.summary.json"
    return None


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run repeated experiments and estimate phi in each."""
    run = _run_config(args)
    summary = run_trials(
        run.experiment,
        run.trials,
        seed=run.seed,
        n_threads=args.threads,
        keep_records=True,
    )
    with _output(args.out) as stream:
        if args.format == "json":
            _write_json(
                stream,
                {
                    "summary": summary.to_dict(),
                    "trials": [dataclasses.asdict(r) for r in summary.records],
                },
            )
            return 0
        _write_csv(
            stream,
            ["trial", "n_postselected", "phi_hat"],
            [
                [str(r.trial), str(r.n_postselected), _format_float(r.phi_hat)]
                for r in summary.records
            ],
        )
    summary_path = _summary_path(args)
    if summary_path is None:
        _write_json(sys.stderr, summary.to_dict())
    else:
        with _output(summary_path) as stream:
            _write_json(stream, summary.to_dict())
    return 0


def _write_columns(args: argparse.Namespace, columns: Dict[str, np.ndarray]) -> None:
    with _output(args.out) as stream:
        if args.format == "json":
            _write_json(stream, {key: list(values) for key, values in columns.items()})
            return
        rows = zip(*columns.values())
        _write_csv(
            stream,
            list(columns),
            [[_format_float(value) for value in row] for row in rows],
        )


def cmd_sweep_p(args: argparse.Namespace) -> int:
    """Sweep the postselection probability."""
    run = _run_config(args)
    if args.num < 1 or not 0 < args.delta_min <= args.delta_max:
        raise DomainError(
            f"Invalid range delta in [{args.delta_min}, {args.delta_max}] "
            f"with {args.num} points"
        )
    result = sweep_postselection(
        run.experiment,
        np.linspace(args.delta_min, args.delta_max, args.num),
        numeric=args.numeric,
        n_datasets=args.datasets,
        seed=run.seed,
        n_threads=args.threads,
    )
    columns = {
        "x": result.axis,
        "fisher_weak": result.fisher_analytic["weak"],
        "fisher_nops": result.fisher_analytic["no_postselection"],
    }
    if result.fisher_numeric is not None:
        columns["fisher_numeric"] = result.fisher_numeric
        columns["se"] = result.numeric_se
        columns["fisher_data_law"] = result.fisher_analytic["data_law"]
    _write_columns(args, columns)
    return 0


def _parse_probs(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"--probs must be comma separated numbers: {exc}") from exc


def cmd_sweep_m(args: argparse.Namespace) -> int:
    """Sweep the number of injected photons."""
    run = _run_config(args)
    if args.num < 1 or not 1 <= args.m_min <= args.m_max:
        raise DomainError(
            f"Invalid range m in [{args.m_min}, {args.m_max}] with {args.num} points"
        )
    ms = np.unique(np.round(np.geomspace(args.m_min, args.m_max, args.num)))
    result = sweep_photons(run.experiment, ms, _parse_probs(args.probs))
    columns = {"m": result.axis}
    for label, curve in result.fisher_analytic.items():
        columns[f"fisher_{label}"] = curve
    for label, value in result.asymptotes.items():
        logger.info(f"Asymptote of fisher_{label}: {value:.6g}")
    _write_columns(args, columns)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run ``sweep-p`` or ``sweep-m``, depending on the subcommand."""
    if args.command == "sweep-p":
        return cmd_sweep_p(args)
    return cmd_sweep_m(args)


def _text_table(rows: List[List[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = [
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def cmd_table1(args: argparse.Namespace) -> int:
    """Closed-form Fisher information per noise model and measurement."""
    run = _run_config(args)
    config = run.experiment
    report = table1(
        config.alpha_sq, config.m_photons, config.eta_sq, config.delta, config.phi
    )
    with _output(args.out) as stream:
        if args.format == "json":
            _write_json(stream, report.to_dict())
        elif args.format == "text":
            rows = [["noise", "no postselection", "weak", "strong"]]
            rows += [
                [noise] + [f"{value:.6g}" for value in values]
                for noise, *values in report.rows()
            ]
            stream.write(_text_table(rows))
        else:
            _write_csv(
                stream,
                ["noise", "none", "weak", "strong"],
                [
                    [noise] + [_format_float(value) for value in values]
                    for noise, *values in report.rows()
                ],
            )
    return 0


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration file")
    common.add_argument("--preset", choices=PRESET_NAMES, help="named parameter set")
    common.add_argument(
        "--format", choices=["csv", "json", "text"], default="csv", help="output format"
    )
    common.add_argument("--seed", type=int, help="master seed, an unsigned 64-bit int")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help=(
            "worker threads for simulate and sweep-p --numeric, "
            "0 picks automatically"
        ),
    )
    common.add_argument("--out", help="output file, standard output by default")
    common.add_argument("--phi", type=float, help="true coupling g0 / omega_m")
    common.add_argument("--delta", type=float, help="PDBS imbalance")
    common.add_argument("--alpha-sq", type=float, help="mean photon number |alpha|^2")
    common.add_argument("--m-photons", type=int, help="injected single photons")
    common.add_argument("--eta-sq", type=float, help="technical noise strength")
    common.add_argument(
        "--noise", choices=["white", "colored", "quantum", "exponential"]
    )
    common.add_argument("--measurement", choices=["none", "weak", "strong"])
    common.add_argument("--gamma-rate", type=float, help="injection rate in 1/s")
    common.add_argument("--tau-corr", type=float, help="noise correlation time in s")
    return common


def get_parser() -> argparse.ArgumentParser:
    """Get the parser of the wvapy command."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="wvapy",
        description="Weak-value-amplified estimation of optomechanical couplings",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {wvapy.__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    pmf = subparsers.add_parser(
        "pmf", parents=[common], help="photocount-difference distribution"
    )
    pmf.add_argument("--delta-theta", type=float, default=0.0)
    pmf.add_argument("--kmin", type=int)
    pmf.add_argument("--kmax", type=int)
    pmf.set_defaults(func=cmd_pmf)

    fisher = subparsers.add_parser(
        "fisher", parents=[common], help="Fisher information report"
    )
    fisher.add_argument(
        "--mode", choices=["analytic", "numeric", "both"], default="analytic"
    )
    fisher.add_argument("--datasets", type=int, default=10_000)
    fisher.set_defaults(func=cmd_fisher)

    simulate = subparsers.add_parser(
        "simulate", parents=[common], help="repeated experiments"
    )
    simulate.add_argument("--trials", type=int)
    simulate.add_argument(
        "--summary",
        help="JSON summary file, defaults to OUT.summary.json or standard error",
    )
    simulate.set_defaults(func=cmd_simulate)

    sweep_p = subparsers.add_parser(
        "sweep-p",
        parents=[common],
        help="Fisher information against the postselection probability",
        epilog=(
            "columns: x = postselection probability delta^2, fisher_weak = weak "
            "measurement, fisher_nops = no postselection; with --numeric also "
            "fisher_numeric with its standard error se and fisher_data_law, "
            "the value the numeric estimate converges to"
        ),
    )
    sweep_p.add_argument("--delta-min", type=float, default=0.05)
    sweep_p.add_argument("--delta-max", type=float, default=0.5)
    sweep_p.add_argument("--num", type=int, default=10)
    sweep_p.add_argument("--numeric", action="store_true")
    sweep_p.add_argument("--datasets", type=int, default=10_000)
    sweep_p.set_defaults(func=cmd_sweep)

    sweep_m = subparsers.add_parser(
        "sweep-m",
        parents=[common],
        help="Fisher information against the number of injected photons",
        epilog=(
            "columns: m = injected photons, fisher_pK = weak measurement with "
            "the K-th probability of --probs, fisher_nops = no postselection"
        ),
    )
    sweep_m.add_argument("--m-min", type=int, default=10)
    sweep_m.add_argument("--m-max", type=int, default=1_000_000)
    sweep_m.add_argument("--num", type=int, default=50)
    sweep_m.add_argument("--probs", default="0.01,0.03")
    sweep_m.set_defaults(func=cmd_sweep)

    table = subparsers.add_parser(
        "table1", parents=[common], help="Fisher information summary table"
    )
    table.set_defaults(func=cmd_table1)
    return parser


def configure_logging(stream: Optional[TextIO] = None) -> None:
    """Send the wvapy log to standard error at the ``WVA_LOG`` level."""
    name = os.environ.get("WVA_LOG", "warn").strip().lower()
    root = logging.getLogger("wvapy")
    for handler in list(root.handlers):
        if getattr(handler, "wvapy_cli", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr if stream is None else stream)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    handler.wvapy_cli = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(LOG_LEVELS.get(name, logging.WARNING))
    if name not in LOG_LEVELS:
        logger.warning(f"Unknown WVA_LOG level '{name}', using 'warn'")


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging()
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code is None else int(exc.code)
    try:
        return args.func(args)
    except DegenerateInputError as exc:
        logger.error(str(exc))
        return 3
    except (ConfigError, DomainError, DimensionError, SingularCovarianceError) as exc:
        logger.error(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
