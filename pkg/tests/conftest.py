"""Shared fixtures: the calibrated operating point used throughout."""

import math

import numpy as np
import pytest

from dcesim import CovarianceMatrix, default_config, mode_pair


@pytest.fixture
def config():
    """Calibrated default circuit at 50 mK (drive amplitude set per test)."""
    return default_config()


@pytest.fixture
def pair(config):
    """The standard detuned pair at 0.15 of the drive frequency."""
    wd = config.drive_angular_frequency
    return mode_pair(wd, 0.15 * wd)


def two_mode_squeezed_cov(r, n_minus=0.0, n_plus=0.0):
    """Covariance of a (possibly thermal) two-mode squeezed state.

    For ``n_minus = n_plus = 0`` this is the pure state with squeeze
    parameter ``r``: diagonal blocks ``cosh(2r)/2 I``, cross block
    ``sinh(2r)/2 diag(1, -1)``.
    """
    a = (n_minus + 0.5) * math.cosh(2.0 * r)
    b = (n_plus + 0.5) * math.cosh(2.0 * r)
    c = math.sqrt((n_minus + 0.5) * (n_plus + 0.5)) * math.sinh(2.0 * r)
    v = np.diag([a, a, b, b])
    v[0, 2] = v[2, 0] = c
    v[1, 3] = v[3, 1] = -c
    return CovarianceMatrix(v)
