"""Physical constants, unit conversions and characteristic frequencies.

All frequencies are angular frequencies in rad/s.
"""

import math

import numpy as np

from .errors import DomainError

# CODATA 2018 exact / recommended values, SI units.
HBAR = 1.054571817e-34  # J s
C = 299792458.0  # m/s
K_B = 1.380649e-23  # J/K
E_CHARGE = 1.602176634e-19  # C


class PhysicalConstants:
    """Read-only namespace with the constants entering the Lifshitz formula."""

    __slots__ = ()

    hbar = HBAR
    c = C
    k_B = K_B

    def __setattr__(self, name, value):
        raise AttributeError("physical constants are not configurable")


CONSTANTS = PhysicalConstants()


def ev_to_radsec(energy):
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    energy = float(energy)
    if not energy >= 0.0:
        raise DomainError(f"photon energy must be non-negative, got {energy!r} eV")
    return energy * E_CHARGE / HBAR


def radsec_to_ev(omega):
    omega = float(omega)
    if not omega >= 0.0:
        raise DomainError(f"frequency must be non-negative, got {omega!r} rad/s")
    return omega * HBAR / E_CHARGE


def matsubara_frequency(n, T):
    """Matsubara frequency ``2 pi k_B T n / hbar`` in rad/s.

    ``n`` may be an integer or an integer array.
    """
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r} K")
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError("Matsubara index must be non-negative")
    zeta = n_arr * (2.0 * math.pi * K_B * T / HBAR)
    if np.ndim(zeta) == 0:
        return float(zeta)
    return zeta


def characteristic_frequency(a):
    """Gap frequency ``c / 2a`` for a plate separation ``a`` in metres."""
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r} m")
    return C / (2.0 * a)


def anomalous_frequency(params):
    """Anomalous-skin-effect frequency ``(v_F / c) omega_p``."""
    return params.vf_over_c * params.omega_p
