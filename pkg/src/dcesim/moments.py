"""
Second moments of the two output modes and their quadrature covariance.

A thermal input field is fully characterized by its occupations
``nbar(omega)``, with ``<a^dag(nu) a(nu')> = nbar(nu) delta``,
``<a(nu) a^dag(nu')> = (nbar(nu)+1) delta`` and ``<a a> = 0``.  Contracting
the linear scattering rows of the correlated output pair against these
rules yields all second moments of the output modes, and from them the
4x4 quadrature covariance matrix in the ordering
``R = (q-, p-, q+, p+)`` with ``q = (b + b^dag)/sqrt(2)`` and
``p = -i (b - b^dag)/sqrt(2)`` (vacuum variance 1/2).

Continuum flux densities at the two analysis frequencies are treated as
effective single-mode occupations; every reported indicator is a ratio in
which the measurement bandwidth cancels.
"""

from dataclasses import dataclass

import numpy as np

from .model import modulation_parameter, thermal_occupation
from .scattering import ZERO_FREQUENCY_TOL, solve_scattering

__all__ = [
    "MomentSet",
    "CovarianceMatrix",
    "output_moments",
    "covariance_matrix",
    "moments_from_covariance",
    "pair_statistics",
    "symplectic_eigenvalues",
]


@dataclass
class MomentSet:
    """All second moments of the output mode pair.

    ``n_plus``/``n_minus`` are the occupations ``<b^dag_pm b_pm>``;
    ``w = <b+ b->`` is the two-mode (pair) correlation; ``s_plus``/``s_minus``
    are the single-mode anomalous moments ``<b_pm b_pm>``; ``x = <b^dag_+ b_->``
    is the beam-splitter-type correlation.  For detuned pairs and a generic
    drive, frequency matching forces ``s_pm = x = 0``; at zero detuning they
    are finite.
    """

    n_plus: float
    n_minus: float
    w: complex = 0.0j
    s_plus: complex = 0.0j
    s_minus: complex = 0.0j
    x: complex = 0.0j

    def to_dict(self):
        return {
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "w_re": self.w.real,
            "w_im": self.w.imag,
            "s_plus_re": self.s_plus.real,
            "s_plus_im": self.s_plus.imag,
            "s_minus_re": self.s_minus.real,
            "s_minus_im": self.s_minus.imag,
            "x_re": self.x.real,
            "x_im": self.x.imag,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            n_plus=data["n_plus"],
            n_minus=data["n_minus"],
            w=complex(data["w_re"], data["w_im"]),
            s_plus=complex(data["s_plus_re"], data["s_plus_im"]),
            s_minus=complex(data["s_minus_re"], data["s_minus_im"]),
            x=complex(data["x_re"], data["x_im"]),
        )


@dataclass
class CovarianceMatrix:
    """Symmetric 4x4 quadrature covariance in the ordering (q-, p-, q+, p+)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError("covariance matrix must be 4x4")
        self.matrix = m

    @classmethod
    def vacuum(cls):
        return cls(np.diag([0.5, 0.5, 0.5, 0.5]))

    @property
    def block_minus(self):
        return self.matrix[:2, :2]

    @property
    def block_plus(self):
        return self.matrix[2:, 2:]

    @property
    def block_cross(self):
        return self.matrix[:2, 2:]

    def to_dict(self):
        return {"v": [float(x) for x in self.matrix.reshape(16)]}

    @classmethod
    def from_dict(cls, data):
        return cls(np.asarray(data["v"], dtype=float).reshape(4, 4))


def _matched_value(amplitudes, nu, tol):
    """Amplitude at frequency ``nu`` up to the matching tolerance, else 0."""
    if nu in amplitudes:
        return amplitudes[nu]
    for k, val in amplitudes.items():
        if abs(k - nu) < tol:
            return val
    return 0.0


def _contract(row_plus, row_minus, temperature, tol):
    """Second moments from two scattering rows and a thermal input."""
    occ = {}

    def nb(nu):
        if nu not in occ:
            occ[nu] = thermal_occupation(nu, temperature)
        return occ[nu]

    n_plus = sum(abs(x) ** 2 * nb(k) for k, x in row_plus.alpha.items())
    n_plus += sum(abs(x) ** 2 * (nb(k) + 1.0) for k, x in row_plus.beta.items())
    n_minus = sum(abs(x) ** 2 * nb(k) for k, x in row_minus.alpha.items())
    n_minus += sum(abs(x) ** 2 * (nb(k) + 1.0) for k, x in row_minus.beta.items())

    # <b+ b->: alpha+ beta- picks <a a^dag>, beta+ alpha- picks <a^dag a>
    w = sum(x * _matched_value(row_minus.beta, k, tol) * (nb(k) + 1.0)
            for k, x in row_plus.alpha.items())
    w += sum(x * _matched_value(row_minus.alpha, k, tol) * nb(k)
             for k, x in row_plus.beta.items())

    # <b_pm b_pm>: same-row alpha/beta overlap
    s_minus = sum(x * _matched_value(row_minus.beta, k, tol) * (2.0 * nb(k) + 1.0)
                  for k, x in row_minus.alpha.items())
    s_plus = sum(x * _matched_value(row_plus.beta, k, tol) * (2.0 * nb(k) + 1.0)
                 for k, x in row_plus.alpha.items())

    # <b+^dag b->: alpha+* alpha- picks <a^dag a>, beta+* beta- picks <a a^dag>
    x_corr = sum(np.conj(x) * _matched_value(row_minus.alpha, k, tol) * nb(k)
                 for k, x in row_plus.alpha.items())
    x_corr += sum(np.conj(x) * _matched_value(row_minus.beta, k, tol) * (nb(k) + 1.0)
                  for k, x in row_plus.beta.items())

    return MomentSet(
        n_plus=float(n_plus),
        n_minus=float(n_minus),
        w=complex(w),
        s_plus=complex(s_plus),
        s_minus=complex(s_minus),
        x=complex(x_corr),
    )


def output_moments(config, pair, method="numeric"):
    """Second moments of the output pair for a thermal input.

    Parameters
    ----------
    config : CircuitConfig
    pair : ModePair
    method : {"numeric", "perturbative"}
        ``numeric`` contracts converged scattering rows at both mode
        frequencies over the full sideband ladder.  ``perturbative`` uses
        the first-order closed forms
        ``n_pm = nbar_pm + lam^2 (1 + nbar_+ + nbar_-)`` and
        ``w = i lam (1 + nbar_+ + nbar_-)`` (norm-preserving flux counting).
    """
    temperature = config.temperature
    if method == "perturbative":
        lam = modulation_parameter(config, pair)
        if temperature > 0:
            nb_p = thermal_occupation(pair.omega_plus, temperature)
            nb_m = thermal_occupation(pair.omega_minus, temperature)
        else:
            nb_p = nb_m = 0.0
        gain = 1.0 + nb_p + nb_m
        return MomentSet(
            n_plus=nb_p + lam ** 2 * gain,
            n_minus=nb_m + lam ** 2 * gain,
            w=1.0j * lam * gain,
        )
    if method != "numeric":
        raise ValueError("method must be 'numeric' or 'perturbative'")
    row_minus = solve_scattering(config, pair.omega_minus)
    row_plus = solve_scattering(config, pair.omega_plus)
    tol = ZERO_FREQUENCY_TOL * config.drive_angular_frequency
    return _contract(row_plus, row_minus, temperature, tol)


def covariance_matrix(moments):
    """Quadrature covariance matrix of the Gaussian output state.

    Diagonal blocks are ``(n + 1/2) I + [[Re s, Im s], [Im s, -Re s]]``;
    the cross block combines the pair correlation ``w`` and the
    beam-splitter correlation ``x``.
    """
    m = moments

    def mode_block(n, s):
        return np.array([
            [n + 0.5 + s.real, s.imag],
            [s.imag, n + 0.5 - s.real],
        ])

    cross = np.array([
        [m.w.real + m.x.real, m.w.imag - m.x.imag],
        [m.w.imag + m.x.imag, -m.w.real + m.x.real],
    ])
    v = np.zeros((4, 4))
    v[:2, :2] = mode_block(m.n_minus, m.s_minus)
    v[2:, 2:] = mode_block(m.n_plus, m.s_plus)
    v[:2, 2:] = cross
    v[2:, :2] = cross.T
    return CovarianceMatrix(v)


def moments_from_covariance(cov):
    """Invert :func:`covariance_matrix` (exact for any symmetric 4x4 input)."""
    v = cov.matrix
    n_minus = 0.5 * (v[0, 0] + v[1, 1]) - 0.5
    n_plus = 0.5 * (v[2, 2] + v[3, 3]) - 0.5
    s_minus = complex(0.5 * (v[0, 0] - v[1, 1]), v[0, 1])
    s_plus = complex(0.5 * (v[2, 2] - v[3, 3]), v[2, 3])
    c = v[:2, 2:]
    w = complex(0.5 * (c[0, 0] - c[1, 1]), 0.5 * (c[0, 1] + c[1, 0]))
    x = complex(0.5 * (c[0, 0] + c[1, 1]), 0.5 * (c[1, 0] - c[0, 1]))
    return MomentSet(n_plus=n_plus, n_minus=n_minus, w=w,
                     s_plus=s_plus, s_minus=s_minus, x=x)


def pair_statistics(moments):
    """Joint photon-number expectation ``<b+^dag b+ b-^dag b->``.

    Gaussian (Wick) fourth-moment expansion:
    ``n+ n- + |w|^2 + |x|^2``.  For ideal pair production this equals the
    single-mode flux: photons arrive in pairs.
    """
    m = moments
    return m.n_plus * m.n_minus + abs(m.w) ** 2 + abs(m.x) ** 2


def symplectic_eigenvalues(cov):
    """Symplectic spectrum of a two-mode covariance matrix.

    Both eigenvalues are >= 1/2 for any physical state (the uncertainty
    relation ``V + i Omega / 2 >= 0``).
    """
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.zeros((4, 4))
    omega[:2, :2] = j
    omega[2:, 2:] = j
    eigs = np.linalg.eigvals(1.0j * omega @ cov.matrix)
    vals = np.sort(np.abs(eigs))
    # eigenvalues come in +-nu pairs; take one of each
    return float(vals[0]), float(vals[2])
