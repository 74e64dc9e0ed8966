"""
Nonclassicality and entanglement indicators of the output radiation.

Three independent witnesses are evaluated from the output second moments:

* A normally-ordered quadratic test operator built from both modes.  For
  any field state with a non-negative P function the normally-ordered
  expectation ``<: f^dag_theta f_theta :>`` is >= 0 for every squeezing
  axis ``theta``; a negative minimum certifies a nonclassical state.

* The two-mode squeezing ratio ``sigma2`` of the I/Q voltage quadratures,
  together with the flux-dependent threshold it must exceed for the state
  to be guaranteed nonclassical.  With the axis mapping
  ``theta = phi + pi/4`` the two tests are algebraically equivalent
  whenever the single-mode anomalous moments vanish.

* The logarithmic negativity ``max(0, -ln(2 nu_-))`` of the two-mode
  covariance matrix, positive only for entangled states.  The natural
  logarithm is used: it is the unique base for which a pure two-mode
  squeezed state with squeeze parameter ``r`` gives exactly ``2 r``, which
  in turn makes the small-drive slope of the entanglement equal to the
  dimensionless boundary strength ``L0 omega_d / v``.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import thermal_occupation
from .moments import covariance_matrix

__all__ = [
    "IndicatorReport",
    "InvalidCovarianceError",
    "fdf_theta",
    "fdf_min",
    "two_mode_squeezing",
    "sigma2_threshold",
    "logarithmic_negativity",
    "onset_estimates",
    "indicators_from_moments",
]

# Floating-point guard for radicands that should be non-negative.
_RADICAND_TOL = 1e-12


class InvalidCovarianceError(ValueError):
    """The supplied matrix is not a valid two-mode covariance."""


@dataclass
class IndicatorReport:
    """Every indicator evaluated at one operating point."""

    fdf_min: float
    theta_opt: float
    sigma2: float
    sigma2_threshold: float
    logneg: float

    @property
    def nonclassical_by_fdf(self):
        return self.fdf_min < 0.0

    @property
    def nonclassical_by_sigma2(self):
        return self.sigma2 > self.sigma2_threshold

    @property
    def entangled(self):
        return self.logneg > 0.0

    def to_dict(self):
        return {
            "fdf_min": self.fdf_min,
            "theta_opt": self.theta_opt,
            "sigma2": self.sigma2,
            "sigma2_threshold": self.sigma2_threshold,
            "logneg": self.logneg,
            "nonclassical_by_fdf": self.nonclassical_by_fdf,
            "nonclassical_by_sigma2": self.nonclassical_by_sigma2,
            "entangled": self.entangled,
        }


def fdf_theta(moments, theta):
    """Normally-ordered witness ``<: f^dag_theta f_theta :>`` at a fixed axis.

    The test operator is
    ``f_theta = e^{i theta} b_- + e^{-i theta} b_-^dag
                + i (e^{i theta} b_+ - e^{-i theta} b_+^dag)``.
    Expanding in the second moments:

        2 (n_- + n_+) - 4 Im[e^{2 i theta} w]
                      + 2 Re[e^{2 i theta} (s_- - s_+)] + 4 Im[x]

    which for first-order moments of a thermal input reduces to
    ``2 (nbar_+ + nbar_-) - 4 cos(2 theta) lam (1 + nbar_+ + nbar_-)``.
    """
    m = moments
    phase = cmath.exp(2.0j * theta)
    return float(
        2.0 * (m.n_minus + m.n_plus)
        - 4.0 * (phase * m.w).imag
        + 2.0 * (phase * (m.s_minus - m.s_plus)).real
        + 4.0 * m.x.imag
    )


def fdf_min(moments):
    """Minimum of :func:`fdf_theta` over the squeezing axis.

    Closed form: the theta-dependent part is ``Re[e^{2 i theta} z]`` with
    ``z = 4 i w + 2 (s_- - s_+)``, minimized to ``-|z|``.

    Returns
    -------
    (theta_opt, value) : tuple of float
        Optimal axis in ``[0, pi)`` and the minimized witness.
    """
    m = moments
    z = 4.0j * m.w + 2.0 * (m.s_minus - m.s_plus)
    value = 2.0 * (m.n_minus + m.n_plus) + 4.0 * m.x.imag - abs(z)
    if z == 0:
        theta_opt = 0.0
    else:
        theta_opt = ((math.pi - cmath.phase(z)) / 2.0) % math.pi
    return theta_opt, float(value)


def two_mode_squeezing(moments, pair, phi="optimize"):
    """Two-mode squeezing ratio ``sigma2`` of the I/Q voltage quadratures.

    ``sigma2 = (<I- I+> - <Q- Q+>) /
               ((<I-^2> + <I+^2> + <Q-^2> + <Q+^2>) / 2)``
    with ``I/Q`` the voltage quadratures of the two modes at a common local
    oscillator phase ``phi``.  The voltage prefactors cancel except for the
    frequency weights:

        sigma2 = 4 sqrt(w+ w-) Re[e^{2 i phi} w]
                 / (w+ (2 n+ + 1) + w- (2 n- + 1)).

    ``phi="optimize"`` (default) maximizes over the phase, replacing
    ``Re[e^{2 i phi} w]`` by ``|w|``.
    """
    m = moments
    if phi == "optimize":
        corr = abs(m.w)
    else:
        corr = (cmath.exp(2.0j * phi) * m.w).real
    denom = (
        pair.omega_plus * (2.0 * m.n_plus + 1.0)
        + pair.omega_minus * (2.0 * m.n_minus + 1.0)
    )
    return float(4.0 * math.sqrt(pair.omega_plus * pair.omega_minus) * corr / denom)


def sigma2_threshold(moments, pair):
    """Classical bound on the two-mode squeezing ratio.

    ``2 sqrt(w+ w-) (n+ + n-) / (w+ (2 n+ + 1) + w- (2 n- + 1))`` with the
    output fluxes ``n_pm`` (thermal plus pair-produced).  A measured
    ``sigma2`` above this value cannot come from any state with a
    non-negative P function.
    """
    m = moments
    denom = (
        pair.omega_plus * (2.0 * m.n_plus + 1.0)
        + pair.omega_minus * (2.0 * m.n_minus + 1.0)
    )
    return float(
        2.0 * math.sqrt(pair.omega_plus * pair.omega_minus)
        * (m.n_plus + m.n_minus) / denom
    )


def logarithmic_negativity(cov):
    """Logarithmic negativity of a two-mode Gaussian state.

    ``max(0, -ln(2 nu_-))`` where ``nu_-`` is the smaller symplectic
    eigenvalue of the partially transposed covariance matrix,

        nu_- = sqrt((s - sqrt(s^2 - 4 det V)) / 2),
        s = det A + det B - 2 det C,

    with ``A``, ``B`` the single-mode blocks and ``C`` the cross block.
    Tiny negative radicands from floating-point noise near pure states are
    clamped to zero; genuinely negative discriminants raise
    :class:`InvalidCovarianceError`.
    """
    v = cov.matrix
    det_a = float(np.linalg.det(v[:2, :2]))
    det_b = float(np.linalg.det(v[2:, 2:]))
    det_c = float(np.linalg.det(v[:2, 2:]))
    det_v = float(np.linalg.det(v))
    s = det_a + det_b - 2.0 * det_c
    disc = s * s - 4.0 * det_v
    if disc < 0.0:
        if disc < -_RADICAND_TOL:
            raise InvalidCovarianceError(
                f"discriminant {disc!r} is negative beyond tolerance; "
                "input is not a valid two-mode covariance"
            )
        disc = 0.0
    nu_sq = 0.5 * (s - math.sqrt(disc))
    if nu_sq <= 0.0:
        if nu_sq < -_RADICAND_TOL:
            raise InvalidCovarianceError(
                f"smallest symplectic eigenvalue squared is {nu_sq!r}"
            )
        raise InvalidCovarianceError(
            "partial-transpose symplectic eigenvalue vanished; "
            "input is not a valid two-mode covariance"
        )
    nu = math.sqrt(nu_sq)
    return max(0.0, -math.log(2.0 * nu))


def onset_estimates(config, pair):
    """First-order drive thresholds of the two witnesses.

    Returns ``(eps_star, eps_0)``:

    * ``eps_star`` -- drive where the normally-ordered witness turns
      negative, i.e. where the sideband coupling reaches half the total
      thermal occupation: ``lam(eps_star) = (nbar_+ + nbar_-) / 2``.
    * ``eps_0`` -- onset of entanglement,
      ``eps_0 = (2 v / (L0 omega_d)) sqrt(nbar_+ nbar_-)``.

    Both vanish at zero temperature: any nonzero drive then produces
    nonclassical, entangled radiation.
    """
    t = config.temperature
    if t == 0.0:
        return 0.0, 0.0
    nb_p = thermal_occupation(pair.omega_plus, t)
    nb_m = thermal_occupation(pair.omega_minus, t)
    lam_unit = (
        config.effective_length / config.line_speed
        * math.sqrt(pair.omega_plus * pair.omega_minus)
    )
    eps_star = 0.5 * (nb_p + nb_m) / lam_unit
    eps_0 = (2.0 / config.drive_strength) * math.sqrt(nb_p * nb_m)
    return float(eps_star), float(eps_0)


def indicators_from_moments(moments, pair):
    """Assemble the full :class:`IndicatorReport` for one operating point."""
    theta_opt, value = fdf_min(moments)
    return IndicatorReport(
        fdf_min=value,
        theta_opt=theta_opt,
        sigma2=two_mode_squeezing(moments, pair),
        sigma2_threshold=sigma2_threshold(moments, pair),
        logneg=logarithmic_negativity(covariance_matrix(moments)),
    )
