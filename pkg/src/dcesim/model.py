"""
Physical parameters, mode bookkeeping and thermal-state inputs.

The circuit under study is a semi-infinite superconducting waveguide whose
termination is a flux-tunable inductive element (a SQUID acting as a single
effective Josephson junction).  The termination imposes a boundary condition
equivalent to a mirror located an effective length ``L_eff`` behind the end
of the line, and a sinusoidal modulation of the Josephson energy,
``E_J(t) = E_J0 * (1 + epsilon * sin(omega_d * t))``, turns that length into
``L_eff(t) = L_eff0 / (1 + epsilon * sin(omega_d * t))``.

All downstream quantities are reported in natural units (hbar = 1, per-mode
dimensionless occupations, vacuum quadrature variance 1/2).  The line
impedance ``Z0`` and hbar only enter the voltage scaling of quadratures and
cancel in every dimensionless indicator; they are carried for completeness.
"""

import json
import math
from dataclasses import dataclass, replace

__all__ = [
    "HBAR",
    "KB",
    "CircuitConfig",
    "ModePair",
    "default_config",
    "load_config",
    "config_to_dict",
    "config_from_dict",
    "thermal_occupation",
    "mode_pair",
    "modulation_parameter",
]

# CODATA 2018, fixed to 10 significant digits for reproducibility.  Only the
# ratio hbar*omega/(kB*T) enters the reported indicators.
HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23       # J / K

BOUNDARY_FORMS = ("ej_exact", "linear")

# Keys of the flat JSON configuration document.
_CONFIG_KEYS = {
    "drive_frequency_hz",
    "epsilon",
    "temperature_k",
    "line_speed_m_per_s",
    "effective_length_m",
    "impedance_ohm",
    "truncation",
    "tolerance",
    "boundary_form",  # optional; selects the time-dependent boundary variant
}


@dataclass(frozen=True)
class CircuitConfig:
    """Physical parameters of the driven waveguide/SQUID system.

    Attributes
    ----------
    drive_angular_frequency : float
        Modulation angular frequency ``omega_d`` in rad/s.
    epsilon : float
        Normalized modulation amplitude, ``0 <= epsilon < 1``.  At
        ``epsilon = 1`` the instantaneous Josephson energy touches zero and
        the effective length diverges.
    temperature : float
        Input-field temperature in kelvin, ``>= 0``.
    line_speed : float
        Speed of light in the waveguide, m/s.
    effective_length : float
        Static effective length ``L_eff0`` of the termination, meters.
    impedance : float
        Characteristic impedance ``Z0`` in ohm.  Cancels in all reported
        indicators; kept for voltage-scaling documentation.
    truncation : int
        Starting half-width of the sideband ladder used by the scattering
        solver (adaptively doubled until converged).
    convergence_tol : float
        Convergence tolerance for the scattering solver (commutator defect
        and amplitude drift).
    boundary_form : str
        ``"ej_exact"`` (default) uses the boundary condition proportional to
        the modulated Josephson energy, i.e. ``L_eff(t) = L0/(1 + eps sin)``;
        ``"linear"`` modulates the length linearly,
        ``L_eff(t) = L0 (1 + eps sin)``.  Both agree to first order in
        ``epsilon``.
    """

    drive_angular_frequency: float
    epsilon: float
    temperature: float
    line_speed: float
    effective_length: float
    impedance: float = 50.0
    truncation: int = 20
    convergence_tol: float = 1e-10
    boundary_form: str = "ej_exact"

    def __post_init__(self):
        if not self.drive_angular_frequency > 0:
            raise ValueError("drive_angular_frequency must be positive")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if not self.line_speed > 0:
            raise ValueError("line_speed must be positive")
        if not self.effective_length > 0:
            raise ValueError("effective_length must be positive")
        if not self.impedance > 0:
            raise ValueError("impedance must be positive")
        if int(self.truncation) != self.truncation or self.truncation < 1:
            raise ValueError("truncation must be a positive integer")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if self.boundary_form not in BOUNDARY_FORMS:
            raise ValueError(f"boundary_form must be one of {BOUNDARY_FORMS}")
        if not math.isfinite(self.drive_strength):
            raise ValueError("dimensionless drive strength must be finite")

    @property
    def drive_strength(self):
        """Dimensionless boundary strength ``L_eff0 * omega_d / v``."""
        return self.effective_length * self.drive_angular_frequency / self.line_speed

    @property
    def length_modulation(self):
        """Effective length modulation amplitude ``delta L_eff = epsilon * L_eff0``."""
        return self.epsilon * self.effective_length

    def with_(self, **kwargs):
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class ModePair:
    """Two analysis frequencies placed symmetrically around half the drive.

    ``omega_plus + omega_minus == drive`` holds bit-exactly: ``omega_minus``
    is constructed as ``drive - omega_plus`` (exact by the Sterbenz lemma for
    ``omega_plus in [drive/2, drive)``).
    """

    drive: float
    detuning: float

    def __post_init__(self):
        if not self.drive > 0:
            raise ValueError("drive frequency must be positive")
        if not 0.0 <= self.detuning < 0.5 * self.drive:
            raise ValueError(
                "detuning must satisfy 0 <= detuning < drive/2 "
                "(the lower mode frequency must stay positive)"
            )
        if not self.omega_minus > 0:
            raise ValueError("lower mode frequency must be positive")

    @property
    def omega_plus(self):
        return 0.5 * self.drive + self.detuning

    @property
    def omega_minus(self):
        return self.drive - self.omega_plus


def mode_pair(drive_angular_frequency, detuning):
    """Construct the correlated mode pair ``omega_pm = omega_d/2 +- detuning``.

    Parameters
    ----------
    drive_angular_frequency : float
        Drive angular frequency in rad/s.
    detuning : float
        Symmetric detuning in rad/s, ``0 <= detuning < omega_d/2``.

    Raises
    ------
    ValueError
        If the detuning would push the lower mode to a non-positive
        frequency.
    """
    return ModePair(drive=drive_angular_frequency, detuning=detuning)


def thermal_occupation(omega, temperature):
    """Bose-Einstein occupation ``1 / (exp(hbar*omega/(kB*T)) - 1)``.

    Returns exactly 0.0 for ``temperature == 0`` (no overflow is attempted).

    Parameters
    ----------
    omega : float
        Mode angular frequency in rad/s, strictly positive.
    temperature : float
        Temperature in kelvin, ``>= 0``.
    """
    if omega <= 0:
        raise ValueError("thermal occupation requires omega > 0")
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (KB * temperature)
    if x > 700.0:  # exp would overflow; occupation is far below resolution
        return 0.0
    return 1.0 / math.expm1(x)


def modulation_parameter(config, pair):
    """Dimensionless sideband coupling strength of the modulated boundary.

    Returns ``epsilon * (L_eff0 / v) * sqrt(omega_plus * omega_minus)``,
    the small parameter of the first-order treatment.  The associated length
    modulation amplitude is ``config.length_modulation``.
    """
    return (
        config.epsilon
        * (config.effective_length / config.line_speed)
        * math.sqrt(pair.omega_plus * pair.omega_minus)
    )


def default_config(
    epsilon=0.0,
    temperature_k=0.050,
    drive_frequency_hz=10e9,
    line_speed=1.2e8,
    drive_strength=0.28,
    **kwargs,
):
    """Calibrated default circuit.

    The dimensionless strength ``L_eff0 * omega_d / v`` defaults to 0.28
    (``L_eff0 ~ 0.53 mm`` at ``v = 1.2e8 m/s`` and 10 GHz drive), calibrated
    so that the first-order entanglement onset at 50 mK and detuning
    ``0.15 * omega_d`` falls at ``epsilon ~ 0.06``.  Every parameter can be
    overridden.
    """
    omega_d = 2.0 * math.pi * drive_frequency_hz
    return CircuitConfig(
        drive_angular_frequency=omega_d,
        epsilon=epsilon,
        temperature=temperature_k,
        line_speed=line_speed,
        effective_length=drive_strength * line_speed / omega_d,
        **kwargs,
    )


def config_to_dict(config):
    """Flat key/value form of a config, matching the JSON file schema."""
    return {
        "drive_frequency_hz": config.drive_angular_frequency / (2.0 * math.pi),
        "epsilon": config.epsilon,
        "temperature_k": config.temperature,
        "line_speed_m_per_s": config.line_speed,
        "effective_length_m": config.effective_length,
        "impedance_ohm": config.impedance,
        "truncation": config.truncation,
        "tolerance": config.convergence_tol,
        "boundary_form": config.boundary_form,
    }


def config_from_dict(data, base=None):
    """Build a CircuitConfig from a flat key/value mapping.

    Unknown keys raise ``ValueError``.  Keys that are absent fall back to
    ``base`` (or the calibrated default circuit).
    """
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    cfg = base if base is not None else default_config()
    fields = {}
    if "drive_frequency_hz" in data:
        fields["drive_angular_frequency"] = 2.0 * math.pi * float(data["drive_frequency_hz"])
    if "epsilon" in data:
        fields["epsilon"] = float(data["epsilon"])
    if "temperature_k" in data:
        fields["temperature"] = float(data["temperature_k"])
    if "line_speed_m_per_s" in data:
        fields["line_speed"] = float(data["line_speed_m_per_s"])
    if "effective_length_m" in data:
        fields["effective_length"] = float(data["effective_length_m"])
    if "impedance_ohm" in data:
        fields["impedance"] = float(data["impedance_ohm"])
    if "truncation" in data:
        fields["truncation"] = int(data["truncation"])
    if "tolerance" in data:
        fields["convergence_tol"] = float(data["tolerance"])
    if "boundary_form" in data:
        fields["boundary_form"] = str(data["boundary_form"])
    return cfg.with_(**fields) if fields else cfg


def load_config(path, base=None):
    """Load a CircuitConfig from a UTF-8 JSON file with the flat schema."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: configuration file must contain a JSON object")
    return config_from_dict(data, base=base)
