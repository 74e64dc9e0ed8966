"""
Linear input -> output map of the sinusoidally modulated boundary.

The boundary condition of the modulated termination,

    (1 + eps * sin(omega_d t)) * Phi(0, t) + L0 * dPhi/dx(0, t) = 0,

couples the travelling-wave amplitude at frequency ``omega`` to its
sidebands ``omega +- omega_d``.  Writing the field in terms of incoming
``a(omega)`` and outgoing ``b(omega)`` operators (with the negative-frequency
convention ``a(-omega) = a^dag(omega)``), the condition becomes one linear
equation per ladder frequency ``omega_n = omega0 + n * omega_d``:

    [a_n + b_n] + (eps / 2i) sqrt|omega_n| (u_{n+1} - u_{n-1})
                + i (L0 omega_n / v) [a_n - b_n] = 0,

with ``u_m = (a_m + b_m) / sqrt|omega_m|``.  This is a complex tridiagonal
system; truncating at ``|n| = N`` and solving one column per unit input
yields the scattering row of the output mode at ``omega0``.  Entries at
negative ladder frequencies are the anomalous (pair-creation) amplitudes.

Reported amplitudes are phase-referenced to the static mirror: each ladder
operator is rotated by ``exp(-i arctan(L0 omega/v))`` (the reflection phase
of the static termination) and the drive phase origin is chosen such that
the leading anomalous amplitude is ``-i``-phased.  In this gauge the static
boundary is an ideal mirror, ``alpha(omega0) = -1`` exactly at ``eps = 0``,
and the first-order amplitudes take the standard parametric form

    beta(omega_d - omega0) = -i * lam / sqrt((1+k+^2)(1+k-^2)),

with ``lam = eps (L0/v) sqrt(omega0 (omega_d - omega0))`` and
``k_pm = L0 omega_pm / v``.  The square-root factor is the static response
of the exact boundary; it tends to 1 when ``L0 omega / v`` is small.  See
``docs/numerics.md`` for the derivation.  The gauge is a local mode
rotation: photon numbers, squeezing magnitudes and every reported indicator
are unaffected by it.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .model import modulation_parameter

__all__ = [
    "LadderIndexSet",
    "ScatteringRow",
    "ConvergenceError",
    "perturbative_amplitudes",
    "first_order_row",
    "solve_scattering",
    "commutator_defect",
    "dump_ladder_system",
    "MAX_HALF_WIDTH",
]

# Ladder frequencies closer to zero than this fraction of omega_d are
# rejected: the 1/sqrt|omega| mode measure is physical and the analysis
# frequencies of interest never sit at DC.
ZERO_FREQUENCY_TOL = 1e-9

MAX_HALF_WIDTH = 2 ** 10

_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


class ConvergenceError(RuntimeError):
    """Raised when the adaptive ladder truncation fails to converge.

    Attributes
    ----------
    history : list of (half_width, defect, drift)
        Commutator defect and amplitude drift recorded at each truncation.
    """

    def __init__(self, message, history):
        super().__init__(message)
        self.history = history


@dataclass(frozen=True)
class LadderIndexSet:
    """Sideband ladder ``omega_n = base + n * drive`` for ``|n| <= half_width``."""

    base_frequency: float
    drive: float
    half_width: int

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError("ladder half-width must be >= 1")
        tol = ZERO_FREQUENCY_TOL * self.drive
        if not tol < self.base_frequency < self.drive - tol:
            raise ValueError(
                "base frequency must lie strictly inside (0, drive); "
                f"got {self.base_frequency!r} for drive {self.drive!r}"
            )
        if np.any(np.abs(self.frequencies) < tol):
            raise ValueError("ladder frequency collides with zero")

    @property
    def indices(self):
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def frequencies(self):
        return self.base_frequency + self.indices * self.drive


@dataclass
class ScatteringRow:
    """Input -> output amplitudes for one output frequency.

    ``b(omega0) = sum_nu alpha[nu] a(nu) + sum_nu beta[nu] a^dag(nu)`` with
    ``nu`` running over positive ladder frequencies.  ``beta`` holds the
    anomalous (photon-pair) amplitudes.  ``defect`` is the deviation of
    ``sum |alpha|^2 - sum |beta|^2`` from 1 (the output mode must remain
    bosonic); ``truncation`` is the ladder half-width actually used.
    """

    output_frequency: float
    alpha: dict = field(default_factory=dict)
    beta: dict = field(default_factory=dict)
    truncation: int = 0
    defect: float = 0.0


def commutator_defect(row):
    """Deviation of the Bogoliubov normalization from unity.

    Returns ``| sum |alpha|^2 - sum |beta|^2 - 1 |``; zero for any map that
    preserves the bosonic commutator of the output mode.
    """
    total = sum(abs(x) ** 2 for x in row.alpha.values())
    total -= sum(abs(x) ** 2 for x in row.beta.values())
    return abs(total - 1.0)


def perturbative_amplitudes(config, pair):
    """First-order scattering rows for the correlated mode pair.

    Implements the idealized first-order result for a weakly modulated
    mirror: ``b_pm = -a_pm - i * lam * a_mp^dag`` with
    ``lam = eps (L0/v) sqrt(omega_+ omega_-)``.  Valid for ``lam << 1`` (not
    enforced).  The commutator defect of each row is ``lam**2``, the price
    of truncating at first order.

    Returns
    -------
    (row_minus, row_plus) : tuple of ScatteringRow
        Rows for the output modes at ``omega_minus`` and ``omega_plus``.
    """
    lam = modulation_parameter(config, pair)
    rows = []
    for out_freq, partner in (
        (pair.omega_minus, pair.omega_plus),
        (pair.omega_plus, pair.omega_minus),
    ):
        alpha = {out_freq: -1.0 + 0.0j}
        beta = {} if lam == 0.0 else {partner: -1.0j * lam}
        rows.append(
            ScatteringRow(
                output_frequency=out_freq,
                alpha=alpha,
                beta=beta,
                truncation=0,
                defect=lam ** 2,
            )
        )
    return rows[0], rows[1]


def first_order_row(config, omega0):
    """Analytic first-order row of the exact boundary model.

    First order in the drive amplitude but exact in the static boundary
    response ``k = L0 omega / v``: in the mirror gauge,

        alpha(omega0)           = -1
        beta(omega_d - omega0)  = -i * eps (L0/v) sqrt(omega0 nu)
                                    / sqrt((1 + k0^2)(1 + k_nu^2))
        alpha(omega0 + omega_d) = +i * eps (L0/v) sqrt(omega0 nu')
                                    / sqrt((1 + k0^2)(1 + k_nu'^2))

    (``linear`` boundary form: both sideband phases are conjugated).  This
    is the oracle the numeric solver is tested against; the residual is
    O(eps^2).
    """
    wd = config.drive_angular_frequency
    ratio = config.effective_length / config.line_speed

    def kap(w):
        return ratio * w

    def static_factor(w):
        return math.sqrt((1.0 + kap(omega0) ** 2) * (1.0 + kap(w) ** 2))

    sideband_phase = -1.0j if config.boundary_form == "ej_exact" else 1.0j
    eps = config.epsilon
    alpha = {omega0: -1.0 + 0.0j}
    beta = {}
    if eps != 0.0:
        partner = wd - omega0
        beta[partner] = (
            sideband_phase * eps * ratio * math.sqrt(omega0 * partner) / static_factor(partner)
        )
        up = omega0 + wd
        alpha[up] = (
            -sideband_phase * eps * ratio * math.sqrt(omega0 * up) / static_factor(up)
        )
    row = ScatteringRow(output_frequency=omega0, alpha=alpha, beta=beta, truncation=1)
    row.defect = commutator_defect(row)
    return row


def _system_bands(config, ladder):
    """Tridiagonal bands of the ladder system ``Ma a + Mb b = 0``.

    Returns ``(diag_a, diag_b, up_a, up_b, lo_a, lo_b)`` where ``up[i]`` is
    the coupling of row ``i`` to site ``i+1`` and ``lo[i]`` to site ``i-1``.
    """
    w = ladder.frequencies
    sq = np.sqrt(np.abs(w))
    kap = config.effective_length * w / config.line_speed
    eps = config.epsilon
    diag_a = 1.0 + 1.0j * kap
    diag_b = 1.0 - 1.0j * kap
    size = w.size
    up_a = np.zeros(size, complex)
    lo_a = np.zeros(size, complex)
    if config.boundary_form == "ej_exact":
        # modulation multiplies Phi(0, t): same coupling for a and b
        up_a[:-1] = (eps / 2.0j) * sq[:-1] / sq[1:]
        lo_a[1:] = -(eps / 2.0j) * sq[1:] / sq[:-1]
        up_b = up_a.copy()
        lo_b = lo_a.copy()
    else:
        # modulation multiplies the derivative term: opposite sign for b
        up_a[:-1] = (eps / 2.0) * kap[1:] * sq[:-1] / sq[1:]
        lo_a[1:] = -(eps / 2.0) * kap[:-1] * sq[1:] / sq[:-1]
        up_b = -up_a
        lo_b = -lo_a
    return diag_a, diag_b, up_a, up_b, lo_a, lo_b


def _solve_site_rows(config, ladder, sites):
    """Raw scattering rows ``b_site = sum_m S[site, m] a_m`` for given sites.

    One tridiagonal solve of ``Mb^T y = e_site`` per requested site, then
    ``S[site, :] = -(y^T Ma)``.
    """
    diag_a, diag_b, up_a, up_b, lo_a, lo_b = _system_bands(config, ladder)
    size = diag_b.size
    # scipy banded storage for Mb^T: ab[0, j] = MbT[j-1, j] = Mb[j, j-1]
    ab = np.zeros((3, size), complex)
    ab[0, 1:] = lo_b[1:]
    ab[1, :] = diag_b
    ab[2, :-1] = up_b[:-1]
    rows = {}
    for site in sites:
        rhs = np.zeros(size, complex)
        rhs[site + ladder.half_width] = 1.0
        y = solve_banded((1, 1), ab, rhs)
        out = -(y * diag_a)
        out[1:] -= y[:-1] * up_a[:-1]
        out[:-1] -= y[1:] * lo_a[1:]
        rows[site] = out
    return rows


def _gauge_phases(config, ladder, site=0):
    """Mirror-gauge phase factors for the row of the given output site."""
    kap = config.effective_length * ladder.frequencies / config.line_speed
    theta = np.arctan(kap)
    theta_out = theta[ladder.half_width + site]
    phases = np.exp(-1.0j * (theta_out + theta))
    drive = np.array([_I_POWERS[(n - site) % 4] for n in ladder.indices])
    return phases * drive


def _row_from_amplitudes(ladder, amplitudes, omega0):
    alpha = {}
    beta = {}
    for w, amp in zip(ladder.frequencies, amplitudes):
        if w > 0:
            alpha[w] = complex(amp)
        else:
            beta[-w] = complex(amp)
    row = ScatteringRow(output_frequency=omega0, alpha=alpha, beta=beta,
                        truncation=ladder.half_width)
    row.defect = commutator_defect(row)
    return row


def _solve_at_truncation(config, omega0, half_width, site=0):
    ladder = LadderIndexSet(
        base_frequency=omega0,
        drive=config.drive_angular_frequency,
        half_width=half_width,
    )
    raw = _solve_site_rows(config, ladder, (site,))[site]
    gauged = raw * _gauge_phases(config, ladder, site)
    out_freq = omega0 + site * config.drive_angular_frequency
    return ladder, _row_from_amplitudes(ladder, gauged, out_freq)


def _amplitude_drift(coarse, fine):
    """Largest change of any reported amplitude between two truncations."""
    drift = 0.0
    for old, new in ((coarse.alpha, fine.alpha), (coarse.beta, fine.beta)):
        keys = set(old) | set(new)
        for k in keys:
            a = old.get(k, 0.0)
            b = new.get(k, 0.0)
            drift = max(drift, abs(a - b) / max(1.0, abs(b)))
    return drift


def solve_scattering(config, omega0, _site=0):
    """Converged scattering row of the output mode at ``omega0``.

    Solves the truncated tridiagonal ladder system, doubling the half-width
    (starting from ``config.truncation``) until both the commutator defect
    and the change of every reported amplitude fall below
    ``config.convergence_tol``.  The half-width actually used is recorded on
    the returned row.

    Parameters
    ----------
    config : CircuitConfig
    omega0 : float
        Output frequency, strictly inside ``(0, omega_d)`` and at least
        ``1e-9 * omega_d`` away from 0 and ``omega_d``.

    Raises
    ------
    ValueError
        If ``omega0`` is outside the allowed band or a ladder frequency
        collides with zero.
    ConvergenceError
        If the criteria are not met by half-width ``MAX_HALF_WIDTH``; the
        exception carries the (half_width, defect, drift) history.
    """
    wd = config.drive_angular_frequency
    tol = ZERO_FREQUENCY_TOL * wd
    if not tol < omega0 < wd - tol:
        raise ValueError(
            "output frequency must lie strictly inside (0, drive frequency)"
        )
    if config.epsilon == 0.0 and _site == 0:
        # Static boundary: ideal mirror in the reporting gauge.
        return ScatteringRow(
            output_frequency=omega0,
            alpha={omega0: -1.0 + 0.0j},
            beta={},
            truncation=config.truncation,
            defect=0.0,
        )
    history = []
    half_width = config.truncation
    _, row = _solve_at_truncation(config, omega0, half_width, _site)
    history.append((half_width, row.defect, math.inf))
    while half_width <= MAX_HALF_WIDTH // 2:
        half_width *= 2
        _, fine = _solve_at_truncation(config, omega0, half_width, _site)
        drift = _amplitude_drift(row, fine)
        history.append((half_width, fine.defect, drift))
        if fine.defect < config.convergence_tol and drift < config.convergence_tol:
            return fine
        row = fine
    raise ConvergenceError(
        f"ladder did not converge by half-width {MAX_HALF_WIDTH} "
        f"(defect history: {[(n, d) for n, d, _ in history]})",
        history,
    )


def dump_ladder_system(config, omega0, path, half_width=None):
    """Write the ladder system matrices to a matrix-market-style text file.

    Two coordinate-format sections are written to one file: the matrix
    acting on the outgoing amplitudes and the matrix acting on the incoming
    ones (``Mb b = -Ma a``).  Intended for debugging via the CLI flag
    ``--dump-ladder``.
    """
    if half_width is None:
        half_width = config.truncation
    ladder = LadderIndexSet(
        base_frequency=omega0,
        drive=config.drive_angular_frequency,
        half_width=half_width,
    )
    diag_a, diag_b, up_a, up_b, lo_a, lo_b = _system_bands(config, ladder)
    size = diag_a.size

    def entries(diag, up, lo):
        for i in range(size):
            yield i, i, diag[i]
            if i + 1 < size and up[i] != 0:
                yield i, i + 1, up[i]
            if i - 1 >= 0 and lo[i] != 0:
                yield i, i - 1, lo[i]

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix coordinate complex general\n")
        fh.write(f"% ladder system at omega0={omega0!r} rad/s, "
                 f"half_width={half_width}, boundary_form={config.boundary_form}\n")
        fh.write("% section: outgoing (Mb)\n")
        rows = list(entries(diag_b, up_b, lo_b))
        fh.write(f"{size} {size} {len(rows)}\n")
        for i, j, val in rows:
            fh.write(f"{i + 1} {j + 1} {val.real!r} {val.imag!r}\n")
        fh.write("% section: incoming (Ma)\n")
        rows = list(entries(diag_a, up_a, lo_a))
        fh.write(f"{size} {size} {len(rows)}\n")
        for i, j, val in rows:
            fh.write(f"{i + 1} {j + 1} {val.real!r} {val.imag!r}\n")
    return path
