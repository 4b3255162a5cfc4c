"""Squared reflection coefficients on the imaginary frequency axis.

Conventions: ``y`` is the radial integration variable of the Lifshitz
formula (``y >= zeta / c``), ``par`` is the TM and ``perp`` the TE
polarisation.  The zero-frequency Matsubara term is never obtained by
substituting ``zeta = 0`` into a model; it always goes through one of the
prescriptions defined here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, IndeterminateLimitError, UnresolvedPrescriptionError
from .materials import (Drude, IdealMetal, ImpedanceAnomalousSkin, ImpedanceInfrared,
                        ImpedanceMatched, ImpedanceNormalSkin, Plasma, Tabulated)
from .units import C


class ReflectionPair(NamedTuple):
    r_par_sq: float | np.ndarray
    r_perp_sq: float | np.ndarray


class N0Prescription:
    """Base class of the zero-frequency prescriptions."""

    label = None


@dataclass(frozen=True)
class DrudeLimit(N0Prescription):
    """TM fully reflecting, TE transparent at zero frequency."""

    label = "drude-limit"


@dataclass(frozen=True)
class PlasmaLike(N0Prescription):
    """TE coefficient ``((omega_p - c q) / (omega_p + c q))**2``."""

    omega_p: float
    label = "plasma-like"

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("PlasmaLike needs omega_p > 0")


@dataclass(frozen=True)
class IdealLike(N0Prescription):
    """Both polarisations fully reflecting, as for the ideal metal."""

    label = "ideal-like"


@dataclass(frozen=True)
class Auto(N0Prescription):
    """Pick the prescription matching the model's own zeta -> 0 asymptote."""

    label = "auto"


def resolve_prescription(prescription, model):
    """Turn ``Auto`` into a concrete prescription for ``model``."""
    if not isinstance(prescription, Auto):
        return prescription
    if isinstance(model, Drude):
        return DrudeLimit()
    if isinstance(model, (Plasma, ImpedanceInfrared)):
        return PlasmaLike(model.params.omega_p)
    if isinstance(model, (IdealMetal, ImpedanceNormalSkin, ImpedanceAnomalousSkin,
                          ImpedanceMatched)):
        return IdealLike()
    if isinstance(model, Tabulated):
        raise UnresolvedPrescriptionError(
            "Auto cannot choose a zero-frequency term for tabulated data; set it explicitly")
    raise UnresolvedPrescriptionError(f"no automatic prescription for {type(model).__name__}")


def _pair(r_par, r_perp, scalar):
    if scalar:
        return ReflectionPair(float(r_par), float(r_perp))
    return ReflectionPair(r_par, r_perp)


def _check_y(zeta, y):
    if np.any(zeta < 0):
        raise DomainError("zeta must be non-negative")
    if np.any(y < zeta / C * (1.0 - 1e-12)):
        raise DomainError("y must satisfy y >= zeta / c")


# Dimensionless kernels: x = 2 a zeta / c, t = 2 a y, t >= x.

def dielectric_sq(eps, x, t):
    """Squared Fresnel coefficients in the dimensionless variables."""
    em1 = eps - 1.0
    s = np.sqrt(t * t + em1 * x * x)
    r_par = em1 * ((eps + 1.0) * t * t - x * x) / (eps * t + s) ** 2
    r_perp = em1 * x * x / (t + s) ** 2
    return r_par * r_par, r_perp * r_perp


def impedance_sq(z, x, t):
    """Squared impedance-boundary coefficients in the dimensionless variables."""
    xz = x * z
    tz = t * z
    r_par = (t - xz) / (t + xz)
    r_perp = (x - tz) / (x + tz)
    return r_par * r_par, r_perp * r_perp


def fresnel_dielectric(eps, zeta, y):
    """Squared TM/TE coefficients of a half-space with permittivity ``eps(i zeta)``.

    With ``y1 = sqrt(y**2 + (eps - 1) zeta**2 / c**2)``::

        r_par  = (eps y - y1) / (eps y + y1)
        r_perp = (y - y1) / (y + y1)
    """
    scalar = all(np.ndim(v) == 0 for v in (eps, zeta, y))
    eps, zeta, y = (np.asarray(v, dtype=float) for v in (eps, zeta, y))
    if np.any(~(eps > 1)):
        raise DomainError("eps must exceed 1")
    if np.any(~(zeta > 0)):
        raise DomainError("fresnel_dielectric needs zeta > 0; use n0_term_coefficients")
    _check_y(zeta, y)
    # scale out c: x/t ratios are what matter
    r_par_sq, r_perp_sq = dielectric_sq(eps, zeta / C, y)
    return _pair(r_par_sq, r_perp_sq, scalar)


def fresnel_impedance(Z, zeta, y):
    """Squared coefficients for the impedance boundary condition.

    ``r_par = (c y - zeta Z) / (c y + zeta Z)``,
    ``r_perp = (zeta - c y Z) / (zeta + c y Z)``.
    """
    scalar = all(np.ndim(v) == 0 for v in (Z, zeta, y))
    Z, zeta, y = (np.asarray(v, dtype=float) for v in (Z, zeta, y))
    if np.any(Z < 0):
        raise DomainError("impedance must be non-negative")
    _check_y(zeta, y)
    if np.any((zeta == 0) & (Z == 0)):
        raise IndeterminateLimitError(
            "zeta = 0 with Z = 0 is the 0/0 limit; choose a zero-frequency prescription")
    r_par_sq, r_perp_sq = impedance_sq(Z, zeta, C * y)
    return _pair(r_par_sq, r_perp_sq, scalar)


def n0_dimensionless(prescription, t, two_a_over_c):
    """Zero-frequency coefficients as functions of ``t = 2 a q``."""
    t = np.asarray(t, dtype=float)
    ones = np.ones_like(t)
    if isinstance(prescription, DrudeLimit):
        return ones, np.zeros_like(t)
    if isinstance(prescription, IdealLike):
        return ones, ones
    if isinstance(prescription, PlasmaLike):
        w = prescription.omega_p * two_a_over_c
        r = (w - t) / (w + t)
        return ones, r * r
    if isinstance(prescription, Auto):
        raise UnresolvedPrescriptionError("resolve Auto against a model first")
    raise TypeError(f"unknown prescription {prescription!r}")


def n0_term_coefficients(prescription, q, model=None):
    """Squared coefficients of the zero-frequency term at in-plane wave number ``q``.

    ``Auto`` is resolved against ``model``; without one it cannot be
    resolved and :class:`UnresolvedPrescriptionError` is raised.
    """
    scalar = np.ndim(q) == 0
    q = np.asarray(q, dtype=float)
    if np.any(~(q > 0)):
        raise DomainError("q must be positive")
    if isinstance(prescription, Auto):
        if model is None:
            raise UnresolvedPrescriptionError("Auto needs the response model to resolve")
        prescription = resolve_prescription(prescription, model)
    # with two_a_over_c = 1/c, t plays the role of q
    r_par_sq, r_perp_sq = n0_dimensionless(prescription, q, 1.0 / C)
    return _pair(r_par_sq, r_perp_sq, scalar)
