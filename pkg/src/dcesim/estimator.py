"""
Indicator estimation from measured (or synthetic) quadrature records.

Every indicator in this package can be evaluated from experimentally
accessible quadrature correlations.  This module ingests per-shot records
of the four quadratures ``(i-, q-, i+, q+)`` in calibrated dimensionless
units (vacuum variance 1/2), estimates the covariance matrix and all
indicators, and attaches one-sigma uncertainties via a deterministic
nonparametric bootstrap.  A synthetic Gaussian sampler and an additive
detector-noise transform are included for round-trip and sensitivity
studies.

Randomness is counter-based (Philox) with per-resample child seeds derived
from ``(seed, resample index)``, so resamples are independent, may run in
any order, and the report is bit-identical for identical inputs.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .indicators import indicators_from_moments
from .moments import CovarianceMatrix, moments_from_covariance

__all__ = [
    "CHANNELS",
    "QuadratureRecordSet",
    "EstimateReport",
    "ParseError",
    "DegenerateDataError",
    "load_calibration",
    "load_quadrature_records",
    "sample_quadratures",
    "write_quadrature_records",
    "estimate_covariance",
    "bootstrap_indicators",
    "inject_detector_noise",
    "indicator_standard_errors",
]

CHANNELS = ("i_minus", "q_minus", "i_plus", "q_plus")

_INDICATOR_NAMES = ("fdf_min", "sigma2", "sigma2_threshold", "logneg")


class ParseError(ValueError):
    """A quadrature record file failed to parse; carries the line number."""

    def __init__(self, path, line_number, message):
        super().__init__(f"{path}:{line_number}: {message}")
        self.line_number = line_number


class DegenerateDataError(ValueError):
    """The records cannot support a covariance estimate."""


@dataclass
class QuadratureRecordSet:
    """Calibrated quadrature samples, one row per shot.

    ``samples`` has shape (M, 4) in channel order ``CHANNELS``; ``gains``
    and ``offsets`` record the calibration that was applied
    (``calibrated = (raw - offset) / gain`` per channel).
    """

    samples: np.ndarray
    gains: np.ndarray = field(default_factory=lambda: np.ones(4))
    offsets: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 4:
            raise ValueError("samples must have shape (M, 4)")
        if s.shape[0] < 2:
            raise ValueError("at least two samples are required")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        self.samples = s
        self.gains = np.asarray(self.gains, dtype=float)
        self.offsets = np.asarray(self.offsets, dtype=float)

    @property
    def sample_count(self):
        return self.samples.shape[0]


@dataclass
class EstimateReport:
    """Point estimates with bootstrap one-sigma uncertainties.

    ``intervals`` are centered on the point estimates,
    ``point +- stderr``, which guarantees containment; ``bootstrap_mean``
    is reported alongside for bias diagnostics.  Deterministic for fixed
    ``(records, resamples, seed)``.
    """

    point: dict
    stderr: dict
    intervals: dict
    bootstrap_mean: dict
    resamples: int
    seed: int
    sample_count: int

    def to_dict(self):
        return {
            "point": dict(self.point),
            "stderr": dict(self.stderr),
            "intervals": {k: list(v) for k, v in self.intervals.items()},
            "bootstrap_mean": dict(self.bootstrap_mean),
            "resamples": self.resamples,
            "seed": self.seed,
            "sample_count": self.sample_count,
        }


def load_calibration(path):
    """Per-channel gain/offset sidecar: JSON mapping channel -> {gain, offset}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    gains = np.ones(4)
    offsets = np.zeros(4)
    unknown = set(data) - set(CHANNELS)
    if unknown:
        raise ValueError(f"unknown calibration channels: {sorted(unknown)}")
    for idx, name in enumerate(CHANNELS):
        entry = data.get(name, {})
        gains[idx] = float(entry.get("gain", 1.0))
        offsets[idx] = float(entry.get("offset", 0.0))
        if gains[idx] == 0.0:
            raise ValueError(f"calibration gain for {name} must be nonzero")
    return gains, offsets


def load_quadrature_records(path, calibration=None):
    """Parse a quadrature record CSV into a calibrated record set.

    The file must be UTF-8 with header ``i_minus,q_minus,i_plus,q_plus``,
    one sample per row, decimal floating point.  Lines starting with ``#``
    are ignored.  ``calibration`` is an optional path to a JSON sidecar
    with per-channel gain/offset.

    Raises
    ------
    ParseError
        On a malformed row, wrong column count or non-finite value; the
        error message carries the offending line number.
    """
    gains, offsets = (np.ones(4), np.zeros(4))
    if calibration is not None:
        gains, offsets = load_calibration(calibration)
    rows = []
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = [p.strip() for p in text.split(",")]
            if not header_seen:
                if parts != list(CHANNELS):
                    raise ParseError(
                        path, line_number,
                        f"expected header {','.join(CHANNELS)!r}, got {text!r}")
                header_seen = True
                continue
            if len(parts) != 4:
                raise ParseError(
                    path, line_number,
                    f"expected 4 columns, got {len(parts)}")
            try:
                values = [float(p) for p in parts]
            except ValueError as exc:
                raise ParseError(path, line_number, str(exc)) from None
            if not all(math.isfinite(v) for v in values):
                raise ParseError(path, line_number, "non-finite value")
            rows.append(values)
    if not header_seen:
        raise ParseError(path, 0, "missing header line")
    if len(rows) < 2:
        raise ParseError(path, 0, "need at least two sample rows")
    raw = np.asarray(rows, dtype=float)
    calibrated = (raw - offsets) / gains
    return QuadratureRecordSet(samples=calibrated, gains=gains, offsets=offsets)


def write_quadrature_records(path, samples, comment=None):
    """Write samples to the CSV schema read by :func:`load_quadrature_records`."""
    samples = np.asarray(samples, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(CHANNELS)
        for row in samples:
            writer.writerow([repr(float(v)) for v in row])
    return path


def _rng(seed, stream=None):
    spawn_key = () if stream is None else (stream,)
    seq = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(seq))


def sample_quadratures(cov, count, seed):
    """Draw Gaussian quadrature samples with the given covariance.

    Sampling goes through the symmetric square root of the covariance
    (eigen-decomposition with tiny negative eigenvalues clipped to zero),
    using a counter-based generator; identical arguments give identical
    samples.
    """
    v = cov.matrix if isinstance(cov, CovarianceMatrix) else np.asarray(cov, float)
    evals, evecs = np.linalg.eigh(v)
    if np.any(evals < -1e-12):
        raise ValueError("covariance matrix is not positive semidefinite")
    root = evecs @ np.diag(np.sqrt(np.clip(evals, 0.0, None))) @ evecs.T
    z = _rng(seed).standard_normal((int(count), 4))
    return z @ root


def estimate_covariance(records):
    """Symmetrized sample covariance of the four channels, with errors.

    Returns ``(CovarianceMatrix, stderr)`` where ``stderr[i, j]`` is the
    Gaussian fourth-moment standard error
    ``sqrt((V_ii V_jj + V_ij^2) / (M - 1))``.

    Raises
    ------
    DegenerateDataError
        If any channel has zero variance.
    """
    x = records.samples
    m = records.sample_count
    v = np.cov(x, rowvar=False, ddof=1)
    if np.any(np.diag(v) <= 0.0):
        raise DegenerateDataError("a channel has zero variance")
    diag = np.diag(v)
    stderr = np.sqrt((np.outer(diag, diag) + v ** 2) / (m - 1))
    return CovarianceMatrix(0.5 * (v + v.T)), stderr


def _indicators_from_cov(cov, pair):
    report = indicators_from_moments(moments_from_covariance(cov), pair)
    return {name: getattr(report, name) for name in _INDICATOR_NAMES}


def bootstrap_indicators(records, pair, resamples=1000, seed=0):
    """Nonparametric bootstrap of all indicators over record rows.

    Each of the ``resamples`` replicas redraws M rows with replacement
    (child seed derived from ``(seed, replica index)``), re-estimates the
    covariance and recomputes ``fdf_min``, ``sigma2``, its threshold and
    the logarithmic negativity.  Replicas are independent; results are
    reduced in index order, so parallel evaluation cannot change the
    report.

    Parameters
    ----------
    records : QuadratureRecordSet
    pair : ModePair
        Supplies the frequency weights of the squeezing ratio.
    resamples : int
        Number of bootstrap replicas, ``>= 100``.
    seed : int
        Master seed of the counter-based generator.
    """
    if resamples < 100:
        raise ValueError("at least 100 bootstrap resamples are required")
    cov, _ = estimate_covariance(records)
    point = _indicators_from_cov(cov, pair)
    m = records.sample_count
    x = records.samples
    values = {name: np.empty(resamples) for name in _INDICATOR_NAMES}
    for b in range(resamples):
        idx = _rng(seed, stream=b).integers(0, m, size=m)
        xb = x[idx]
        vb = np.cov(xb, rowvar=False, ddof=1)
        est = _indicators_from_cov(CovarianceMatrix(0.5 * (vb + vb.T)), pair)
        for name in _INDICATOR_NAMES:
            values[name][b] = est[name]
    stderr = {name: float(np.std(values[name], ddof=1)) for name in _INDICATOR_NAMES}
    mean = {name: float(np.mean(values[name])) for name in _INDICATOR_NAMES}
    intervals = {
        name: (point[name] - stderr[name], point[name] + stderr[name])
        for name in _INDICATOR_NAMES
    }
    return EstimateReport(
        point=point,
        stderr=stderr,
        intervals=intervals,
        bootstrap_mean=mean,
        resamples=resamples,
        seed=seed,
        sample_count=m,
    )


def inject_detector_noise(cov, n_det):
    """Add uncorrelated classical quadrature noise of strength ``n_det``.

    Returns ``V + n_det * I``: the same occupation-like noise power added
    to every quadrature variance, the simplest model of uncorrelated
    detector noise.  ``n_det`` may also be a length-4 sequence for a
    per-channel override.  Noise must be non-negative.
    """
    noise = np.asarray(n_det, dtype=float)
    if noise.ndim == 0:
        noise = np.full(4, float(noise))
    if noise.shape != (4,):
        raise ValueError("detector noise must be a scalar or one value per channel")
    if np.any(noise < 0):
        raise ValueError("detector noise must be non-negative")
    v = cov.matrix if isinstance(cov, CovarianceMatrix) else np.asarray(cov, float)
    return CovarianceMatrix(v + np.diag(noise))


def indicator_standard_errors(cov, pair, sample_count):
    """Delta-method one-sigma errors of the indicators at a model covariance.

    Propagates the Gaussian fourth-moment entry variances
    ``Var(V_ij) = (V_ii V_jj + V_ij^2) / M`` through a central-difference
    gradient of each indicator, treating entries as independent.  Used to
    draw one-sigma confidence contours without sampling.
    """
    v = cov.matrix
    base = _indicators_from_cov(cov, pair)
    diag = np.diag(v)
    var = (np.outer(diag, diag) + v ** 2) / float(sample_count)
    se_sq = {name: 0.0 for name in _INDICATOR_NAMES}
    h = 1e-6
    for i in range(4):
        for j in range(i, 4):
            dv = np.zeros((4, 4))
            dv[i, j] = h
            dv[j, i] = h  # the entry estimate moves both mirror cells
            hi = _indicators_from_cov(CovarianceMatrix(v + dv), pair)
            lo = _indicators_from_cov(CovarianceMatrix(v - dv), pair)
            for name in _INDICATOR_NAMES:
                grad = (hi[name] - lo[name]) / (2.0 * h)
                se_sq[name] += grad ** 2 * var[i, j]
    return {name: base[name] for name in _INDICATOR_NAMES}, {
        name: math.sqrt(se_sq[name]) for name in _INDICATOR_NAMES
    }
