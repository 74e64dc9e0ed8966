"""
Parameter sweeps, figure-style datasets and deterministic file emission.

Grid points are pure functions of the configuration, so they may be
evaluated by a worker pool; rows are always assembled in grid order
(row-major, slowest variable first) and the output is bitwise independent
of scheduling.  Emitted files carry a metadata block (configuration echo,
code version, seed) and no timestamps, so re-running a sweep reproduces
the file byte for byte.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .estimator import indicator_standard_errors, inject_detector_noise
from .indicators import indicators_from_moments
from .model import config_to_dict, mode_pair
from .moments import covariance_matrix, output_moments
from .scattering import ConvergenceError

__all__ = [
    "SweepSpec",
    "SweepPointError",
    "run_sweep",
    "reproduce_figure",
    "emit",
    "SWEEP_COLUMNS",
    "FIGURE_IDS",
]

SWEEP_VARIABLES = ("epsilon", "temperature", "detuning")
METHODS = ("numeric", "perturbative")
FORMATS = ("csv", "json")
FIGURE_IDS = ("fig1a", "fig1b", "fig2", "fig3")

SWEEP_COLUMNS = (
    "epsilon",
    "temperature_k",
    "detuning_frac",
    "method",
    "n_plus",
    "n_minus",
    "w_re",
    "w_im",
    "s_plus_re",
    "s_plus_im",
    "s_minus_re",
    "s_minus_im",
    "x_re",
    "x_im",
    "fdf_min",
    "theta_opt",
    "sigma2",
    "sigma2_threshold",
    "logneg",
    "nonclassical_by_fdf",
    "nonclassical_by_sigma2",
    "entangled",
)


class SweepPointError(RuntimeError):
    """A grid point failed; identifies the point, no partial output is kept."""


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep description.

    ``variable`` is one of ``epsilon``, ``temperature`` (kelvin) or
    ``detuning`` (as a fraction of the drive frequency).  The remaining
    operating point is fixed by ``config`` and ``detuning_frac``.
    """

    variable: str
    start: float
    stop: float
    points: int
    config: object
    detuning_frac: float = 0.15
    method: str = "numeric"
    output_format: str = "csv"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"variable must be one of {SWEEP_VARIABLES}")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep range must satisfy start < stop")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.output_format not in FORMATS:
            raise ValueError(f"output format must be one of {FORMATS}")
        if not 0.0 <= self.detuning_frac < 0.5:
            raise ValueError("detuning fraction must lie in [0, 0.5)")
        lo, hi = self.start, self.stop
        if self.variable == "epsilon" and not (0.0 <= lo and hi < 1.0):
            raise ValueError("epsilon sweep must stay inside [0, 1)")
        if self.variable == "temperature" and lo < 0.0:
            raise ValueError("temperature sweep must be non-negative")
        if self.variable == "detuning" and not (0.0 <= lo and hi < 0.5):
            raise ValueError("detuning sweep must stay inside [0, 0.5)")

    @property
    def grid(self):
        return np.linspace(self.start, self.stop, self.points)


def evaluate_point(config, pair, method="numeric"):
    """Moments plus the full indicator report at one operating point."""
    moments = output_moments(config, pair, method=method)
    report = indicators_from_moments(moments, pair)
    row = {
        "epsilon": config.epsilon,
        "temperature_k": config.temperature,
        "detuning_frac": pair.detuning / config.drive_angular_frequency,
        "method": method,
    }
    row.update(moments.to_dict())
    row.update(report.to_dict())
    return row


def _point_config(spec, value):
    cfg = spec.config
    frac = spec.detuning_frac
    if spec.variable == "epsilon":
        cfg = cfg.with_(epsilon=float(value))
    elif spec.variable == "temperature":
        cfg = cfg.with_(temperature=float(value))
    else:
        frac = float(value)
    pair = mode_pair(cfg.drive_angular_frequency, frac * cfg.drive_angular_frequency)
    return cfg, pair


def run_sweep(spec, max_workers=None):
    """Evaluate a sweep, one row per grid point, in grid order.

    Raises
    ------
    SweepPointError
        If any grid point fails to converge; the failing point is named and
        no partial result is returned.
    """
    if max_workers is None:
        max_workers = min(4, os.cpu_count() or 1)

    def job(item):
        index, value = item
        cfg, pair = _point_config(spec, value)
        try:
            return evaluate_point(cfg, pair, method=spec.method)
        except ConvergenceError as exc:
            raise SweepPointError(
                f"grid point {index} ({spec.variable} = {value!r}) "
                f"failed to converge: {exc}"
            ) from exc

    grid = list(enumerate(spec.grid))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(job, grid))
    return rows


def _figure_eps_grid(points):
    return np.linspace(0.0, 0.6, points)


def reproduce_figure(fig_id, config, detuning_frac=0.15, points=None,
                     method="numeric", noise_n_det=0.0, noise_samples=100000,
                     max_workers=None):
    """Dataset behind one of the four standard views of the model.

    * ``fig1a`` -- normally-ordered witness versus drive for a grid of
      squeezing axes in ``[0, 2 pi)`` (the axis 0 row is the optimum in the
      weak-drive regime).
    * ``fig1b`` -- two-mode squeezing and its classical threshold versus
      drive.
    * ``fig2``  -- logarithmic negativity versus drive, plus the full 4x4
      covariance at drive 0.5 in ``extras``.
    * ``fig3``  -- (temperature, detuning) maps of ``-fdf_min`` and the
      negativity at fixed drive, with one-sigma confidence flags from the
      declared detector-noise model (noise ``noise_n_det`` added to every
      quadrature, indicator errors from ``noise_samples`` assumed shots).

    Returns ``(columns, rows, extras)``.
    """
    if fig_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {fig_id!r}; expected one of {FIGURE_IDS}")
    wd = config.drive_angular_frequency
    pair = mode_pair(wd, detuning_frac * wd)
    extras = {}

    if fig_id in ("fig1a", "fig1b", "fig2"):
        eps_grid = _figure_eps_grid(points or 61)
        spec = SweepSpec(
            variable="epsilon",
            start=float(eps_grid[0]),
            stop=float(eps_grid[-1]),
            points=len(eps_grid),
            config=config,
            detuning_frac=detuning_frac,
            method=method,
        )
        base_rows = run_sweep(spec, max_workers=max_workers)

        if fig_id == "fig1a":
            from .moments import MomentSet
            from .indicators import fdf_theta

            thetas = np.linspace(0.0, 2.0 * math.pi, 16, endpoint=False)
            columns = ("epsilon", "theta", "fdf")
            rows = []
            for row in base_rows:
                m = MomentSet.from_dict(row)
                for theta in thetas:
                    rows.append({
                        "epsilon": row["epsilon"],
                        "theta": float(theta),
                        "fdf": fdf_theta(m, float(theta)),
                    })
            return columns, rows, extras

        if fig_id == "fig1b":
            columns = ("epsilon", "sigma2", "sigma2_threshold",
                       "nonclassical_by_sigma2")
            rows = [{k: row[k] for k in columns} for row in base_rows]
            return columns, rows, extras

        columns = ("epsilon", "logneg", "entangled")
        rows = [{k: row[k] for k in columns} for row in base_rows]
        cov_cfg = config.with_(epsilon=0.5)
        cov = covariance_matrix(output_moments(cov_cfg, pair, method=method))
        extras["covariance_epsilon"] = 0.5
        extras["covariance"] = cov.to_dict()["v"]
        return columns, rows, extras

    # fig3: row-major grid, temperature slowest, then detuning
    n = points or 20
    temps = np.linspace(0.0, 0.15, n)
    fracs = np.linspace(0.01, 0.45, n)
    columns = ("temperature_k", "detuning_frac", "neg_fdf_min", "logneg",
               "fdf_violation_one_sigma", "logneg_violation_one_sigma")

    def job(item):
        t, frac = item
        cfg = config.with_(temperature=float(t))
        p = mode_pair(wd, float(frac) * wd)
        try:
            moments = output_moments(cfg, p, method=method)
        except ConvergenceError as exc:
            raise SweepPointError(
                f"fig3 point (T = {t!r}, detuning_frac = {frac!r}) "
                f"failed to converge: {exc}"
            ) from exc
        report = indicators_from_moments(moments, p)
        noisy = inject_detector_noise(covariance_matrix(moments), noise_n_det)
        values, errors = indicator_standard_errors(noisy, p, noise_samples)
        return {
            "temperature_k": float(t),
            "detuning_frac": float(frac),
            "neg_fdf_min": -report.fdf_min,
            "logneg": report.logneg,
            "fdf_violation_one_sigma":
                values["fdf_min"] + errors["fdf_min"] < 0.0,
            "logneg_violation_one_sigma":
                values["logneg"] - errors["logneg"] > 0.0,
        }

    grid = [(t, frac) for t in temps for frac in fracs]
    if max_workers is None:
        max_workers = min(4, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = list(pool.map(job, grid))
    extras["epsilon"] = config.epsilon
    extras["noise_n_det"] = noise_n_det
    extras["noise_samples"] = noise_samples
    return columns, rows, extras


def _round12(value):
    """Round to the 12 significant digits used in emitted files."""
    return float(f"{value:.12g}")


def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(value)


def _json_cell(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round12(float(value))
    return value


def standard_metadata(config, seed=None, **extra):
    """Self-describing metadata block for emitted files."""
    meta = {
        "generator": "dcesim",
        "version": __version__,
        "config": config_to_dict(config),
        "sigma2_phi": "optimal",
        "grid_order": "row-major, slowest variable first",
    }
    if seed is not None:
        meta["seed"] = seed
    meta.update(extra)
    return meta


def emit(rows, columns, output_format, path, metadata=None):
    """Write a result table to ``path`` as CSV or JSON.

    Numbers are printed with 12 significant digits in both formats, so a
    CSV and a JSON emission of the same table parse to identical values.
    CSV carries the metadata as leading ``#`` comment lines; JSON nests it
    under a ``metadata`` key.  Output is deterministic: emitting the same
    table twice produces byte-identical files.
    """
    if output_format not in FORMATS:
        raise ValueError(f"output format must be one of {FORMATS}")
    metadata = metadata or {}
    try:
        if output_format == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                for key in sorted(metadata):
                    fh.write(f"# {key} = {json.dumps(metadata[key], sort_keys=True)}\n")
                fh.write(",".join(columns) + "\n")
                for row in rows:
                    fh.write(",".join(_format_cell(row[c]) for c in columns) + "\n")
        else:
            payload = {
                "metadata": metadata,
                "columns": list(columns),
                "rows": [{c: _json_cell(row[c]) for c in columns} for row in rows],
            }
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed to write {path!r}: {exc}") from exc
    return path
