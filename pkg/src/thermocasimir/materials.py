"""Material response on the imaginary frequency axis.

Two families of models are supported: dielectric descriptions (plasma,
Drude, tabulated loss spectra continued through the Kramers-Kronig
relation) and surface-impedance descriptions in the normal-skin,
anomalous-skin and infrared regimes.  Conductivities are Gaussian, i.e.
in s^-1, so that ``sigma = omega_p**2 / (4 pi omega_tau)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import hyp2f1

from . import units
from .errors import (DivergentPermittivityError, DomainError, SingularModelError,
                     ValidationError, WrongModelError)


@dataclass(frozen=True)
class MaterialParams:
    """Drude-type metal parameters, frequencies in rad/s.

    ``v_prefactor`` scales the Fermi velocity to the effective velocity
    entering the anomalous-skin impedance.
    """

    omega_p: float
    omega_tau: float = 0.0
    vf_over_c: float = 0.0
    v_prefactor: float = 1.0

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValidationError(f"omega_p must be positive, got {self.omega_p!r}")
        if not self.omega_tau >= 0:
            raise ValidationError(f"omega_tau must be non-negative, got {self.omega_tau!r}")
        if not 0 <= self.vf_over_c < 1:
            raise ValidationError(f"vf_over_c must lie in [0, 1), got {self.vf_over_c!r}")
        if not self.v_prefactor > 0:
            raise ValidationError(f"v_prefactor must be positive, got {self.v_prefactor!r}")

    @classmethod
    def from_ev(cls, wp_ev, wt_ev=0.0, vf_over_c=0.0, v_prefactor=1.0):
        return cls(units.ev_to_radsec(wp_ev), units.ev_to_radsec(wt_ev), vf_over_c,
                   v_prefactor)

    @property
    def v_over_c(self):
        return self.v_prefactor * self.vf_over_c


# Literature-typical gold values; editable defaults, not fitted data.
GOLD = MaterialParams.from_ev(9.0, 0.035, 4.67e-3)


def drude_sigma(params):
    """Gaussian conductivity ``omega_p**2 / (4 pi omega_tau)`` in s^-1."""
    if params.omega_tau == 0:
        raise SingularModelError("conductivity is infinite for omega_tau = 0")
    return params.omega_p ** 2 / (4.0 * math.pi * params.omega_tau)


class Regime(enum.Enum):
    NORMAL_SKIN = "normal-skin"
    ANOMALOUS_SKIN = "anomalous-skin"
    INFRARED = "infrared"


@dataclass(frozen=True)
class RegimeBreakpoints:
    """Upper edges of the normal-skin and anomalous-skin bands (rad/s).

    Bands are half-open, ``[lower, upper)``.  With ``as_upper <= ns_upper``
    the anomalous band is empty.
    """

    ns_upper: float
    as_upper: float

    def __post_init__(self):
        if not self.ns_upper > 0:
            raise ValidationError(f"ns_upper must be positive, got {self.ns_upper!r}")
        if not self.as_upper > 0:
            raise ValidationError(f"as_upper must be positive, got {self.as_upper!r}")

    @classmethod
    def default_for(cls, params):
        return cls(params.omega_tau, units.anomalous_frequency(params))

    @property
    def anomalous_band_empty(self):
        return self.as_upper <= self.ns_upper


# --------------------------------------------------------------------------
# Optical tables

@dataclass(frozen=True)
class DrudeTail:
    """Low-frequency extension ``eps2 = s0 / (omega (1 + omega**2 / omega_tau**2))``.

    ``omega_tau = inf`` gives the pure ``1/omega`` conductor tail.
    """

    s0: float
    omega_tau: float

    def eps2(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.s0 / (omega * (1.0 + (omega / self.omega_tau) ** 2))

    def integral(self, w_max, zeta):
        """``int_0^w_max omega eps2 / (omega**2 + zeta**2) d omega``."""
        zeta = np.asarray(zeta, dtype=float)
        atz = np.arctan(w_max / zeta) / zeta
        if math.isinf(self.omega_tau):
            return self.s0 * atz
        wt = self.omega_tau
        u_z, u_t = zeta ** 2, wt ** 2
        diff = u_t - u_z
        close = np.abs(diff) <= 1e-5 * u_t
        with np.errstate(divide="ignore", invalid="ignore"):
            regular = (atz - math.atan(w_max / wt) / wt) / diff
        u = 0.5 * (u_z + u_t)
        slope = (w_max / (2.0 * u * (u + w_max ** 2))
                 + np.arctan(w_max / np.sqrt(u)) / (2.0 * u ** 1.5))
        return self.s0 * u_t * np.where(close, slope, regular)


@dataclass(frozen=True)
class PowerTail:
    """Power-law extension ``eps2 = amplitude * omega**exponent``.

    Used below the table (exponent > -2) when a Drude fit is not possible,
    and above it with exponent ``-p``.
    """

    amplitude: float
    exponent: float

    def eps2(self, omega):
        return self.amplitude * np.asarray(omega, dtype=float) ** self.exponent

    def integral_below(self, w_max, zeta):
        zeta = np.asarray(zeta, dtype=float)
        b = 0.5 * (2.0 + self.exponent)
        return (self.amplitude * w_max ** (2.0 + self.exponent) / (2.0 * b * zeta ** 2)
                * hyp2f1(1.0, b, b + 1.0, -(w_max / zeta) ** 2))

    def integral_above(self, w_min, zeta):
        zeta = np.asarray(zeta, dtype=float)
        p = -self.exponent
        return (self.amplitude * w_min ** (-p) / p
                * hyp2f1(1.0, 0.5 * p, 0.5 * p + 1.0, -(zeta / w_min) ** 2))


@dataclass(frozen=True)
class ZeroTail:
    def eps2(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float))

    def integral(self, w_max, zeta):
        return np.zeros_like(np.asarray(zeta, dtype=float))


def _fit_low_tail(omega, eps2, rows):
    w = omega[:rows]
    e = eps2[:rows]
    if np.any(e <= 0):
        if np.all(e[:2] == 0):
            return ZeroTail()
        raise ValidationError("cannot extend table below its first rows: eps2 vanishes there")
    # 1 / (omega eps2) = 1/s0 + omega**2 / (s0 omega_tau**2) is linear in omega**2
    alpha, beta = np.polyfit(w ** 2, 1.0 / (w * e), 1)
    if beta > 0:
        if alpha <= 0:
            return DrudeTail(1.0 / beta, math.inf)
        return DrudeTail(1.0 / beta, math.sqrt(beta / alpha))
    slope = math.log(e[1] / e[0]) / math.log(w[1] / w[0])
    if slope <= -2.0:
        raise ValidationError(
            f"low-frequency slope {slope:.3g} of eps2 is not integrable in the dispersion relation")
    return PowerTail(e[0] / w[0] ** slope, slope)


@dataclass(frozen=True, eq=False)
class OpticalTable:
    """Tabulated loss spectrum ``eps2(omega)`` with analytic extensions.

    Build with :meth:`from_arrays`, which validates the rows and fits the
    low- and high-frequency tails.
    """

    omega: np.ndarray
    eps2: np.ndarray
    low_tail: object
    high_tail: PowerTail
    source: str = field(default="", compare=False)

    MIN_ROWS = 8

    @classmethod
    def from_arrays(cls, omega, eps2, high_exponent=3.0, low_fit_rows=4, source="",
                    line_numbers=None):
        omega = np.array(omega, dtype=float)
        eps2 = np.array(eps2, dtype=float)
        lines = line_numbers if line_numbers is not None else [None] * len(omega)
        if omega.ndim != 1 or omega.shape != eps2.shape:
            raise ValidationError("omega and eps2 must be 1-d arrays of equal length")
        if omega.size < cls.MIN_ROWS:
            raise ValidationError(
                f"optical table needs at least {cls.MIN_ROWS} rows, got {omega.size}")
        for i in range(omega.size):
            if not (np.isfinite(omega[i]) and omega[i] > 0):
                raise ValidationError(f"frequency must be positive, got {omega[i]!r}", lines[i])
            if not (np.isfinite(eps2[i]) and eps2[i] >= 0):
                raise ValidationError(f"eps2 must be non-negative, got {eps2[i]!r}", lines[i])
            if i and not omega[i] > omega[i - 1]:
                raise ValidationError("frequencies must be strictly increasing", lines[i])
        if not high_exponent >= 3:
            raise ValidationError(f"high-frequency exponent must be >= 3, got {high_exponent!r}")
        omega.setflags(write=False)
        eps2.setflags(write=False)
        low = _fit_low_tail(omega, eps2, min(low_fit_rows, omega.size))
        high = PowerTail(eps2[-1] * omega[-1] ** high_exponent, -float(high_exponent))
        return cls(omega, eps2, low, high, source)

    def __len__(self):
        return self.omega.size


# 8-point Gauss-Legendre on [0, 1] and its embedded 4-point companion
_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)
_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)


def _table_integral(omega, eps2, zeta, x, w):
    """Piecewise log-log interpolated table contribution for each zeta."""
    lw = np.log(omega)
    u0, u1 = lw[:-1], lw[1:]
    e0, e1 = eps2[:-1], eps2[1:]
    positive = (e0 > 0) & (e1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(positive, (np.log(e1) - np.log(e0)) / (u1 - u0), 0.0)
    half = 0.5 * (u1 - u0)
    u = (0.5 * (u0 + u1))[:, None] + half[:, None] * x[None, :]
    om = np.exp(u)
    loglog = e0[:, None] * np.exp(slope[:, None] * (u - u0[:, None]))
    linear = e0[:, None] + (e1 - e0)[:, None] * (om - omega[:-1, None]) / (
        omega[1:] - omega[:-1])[:, None]
    e = np.where(positive[:, None], loglog, linear)
    # d omega = omega du; integrand omega^2 eps2 / (omega^2 + zeta^2)
    base = (om ** 2 * e * half[:, None] * w[None, :]).ravel()
    om2 = (om ** 2).ravel()
    out = np.empty(zeta.size)
    chunk = max(1, 2_000_000 // max(base.size, 1))
    for s in range(0, zeta.size, chunk):
        z2 = zeta[s:s + chunk, None] ** 2
        out[s:s + chunk] = (base[None, :] / (om2[None, :] + z2)).sum(axis=1)
    return out


@dataclass(frozen=True)
class KKResult:
    value: np.ndarray | float
    error: np.ndarray | float


def kk_transform(table, zeta):
    """Dielectric function ``eps(i zeta)`` from a loss spectrum.

    Evaluates ``1 + (2/pi) int_0^inf omega eps2(omega) / (omega**2 + zeta**2)``
    as analytic low tail + interpolated table + analytic high tail.

    The error estimate combines the quadrature error inside each table
    interval (8- vs 4-point Gauss rule) with the interpolation error, bounded
    by the change when the table integral is repeated on every other row.
    """
    scalar = np.ndim(zeta) == 0
    z = np.atleast_1d(np.asarray(zeta, dtype=float))
    if np.any(~(z > 0)):
        raise DomainError("kk_transform requires zeta > 0")
    om, e2 = table.omega, table.eps2

    mid8 = _table_integral(om, e2, z, _GL8_X, _GL8_W)
    mid4 = _table_integral(om, e2, z, _GL4_X, _GL4_W)
    idx = np.arange(0, om.size, 2)
    if idx[-1] != om.size - 1:
        idx = np.append(idx, om.size - 1)
    coarse = _table_integral(om[idx], e2[idx], z, _GL8_X, _GL8_W)

    low = table.low_tail
    if isinstance(low, PowerTail):
        low_val = low.integral_below(om[0], z)
    else:
        low_val = low.integral(om[0], z)
    high_val = table.high_tail.integral_above(om[-1], z)

    value = 1.0 + (2.0 / math.pi) * (low_val + mid8 + high_val)
    error = (2.0 / math.pi) * (np.abs(mid8 - mid4) + np.abs(mid8 - coarse))
    error = error + 4.0 * np.finfo(float).eps * value
    if scalar:
        return KKResult(float(value[0]), float(error[0]))
    return KKResult(value, error)


# --------------------------------------------------------------------------
# Response models

class ResponseModel:
    """Base class of the closed set of material descriptions."""

    family = None  # "ideal", "dielectric" or "impedance"
    name = None


@dataclass(frozen=True)
class IdealMetal(ResponseModel):
    family = "ideal"
    name = "ideal"


@dataclass(frozen=True)
class Plasma(ResponseModel):
    params: MaterialParams
    family = "dielectric"
    name = "plasma"


@dataclass(frozen=True)
class Drude(ResponseModel):
    params: MaterialParams
    family = "dielectric"
    name = "drude"

    def __post_init__(self):
        if not self.params.omega_tau > 0:
            raise SingularModelError("Drude model requires omega_tau > 0")


@dataclass(frozen=True)
class Tabulated(ResponseModel):
    table: OpticalTable
    family = "dielectric"
    name = "tabulated"


@dataclass(frozen=True)
class ImpedanceNormalSkin(ResponseModel):
    params: MaterialParams
    family = "impedance"
    name = "normal-skin"

    def __post_init__(self):
        if not self.params.omega_tau > 0:
            raise SingularModelError("normal-skin impedance requires omega_tau > 0")


@dataclass(frozen=True)
class ImpedanceAnomalousSkin(ResponseModel):
    params: MaterialParams
    family = "impedance"
    name = "anomalous-skin"

    def __post_init__(self):
        if not self.params.vf_over_c > 0:
            raise SingularModelError("anomalous-skin impedance requires vf_over_c > 0")


@dataclass(frozen=True)
class ImpedanceInfrared(ResponseModel):
    params: MaterialParams
    family = "impedance"
    name = "infrared"


@dataclass(frozen=True)
class ImpedanceMatched(ResponseModel):
    """Impedance whose regime follows the frequency being evaluated."""

    params: MaterialParams
    breakpoints: RegimeBreakpoints = None
    family = "impedance"
    name = "matched"

    def __post_init__(self):
        if not self.params.vf_over_c > 0:
            raise SingularModelError("matched impedance requires vf_over_c > 0")
        if self.breakpoints is None:
            if not self.params.omega_tau > 0:
                raise SingularModelError(
                    "default breakpoints need omega_tau > 0; pass breakpoints explicitly")
            object.__setattr__(self, "breakpoints", RegimeBreakpoints.default_for(self.params))


def eps_imag_axis(model, zeta):
    """``eps(i zeta)`` for the dielectric models (scalar or array ``zeta``)."""
    if model.family != "dielectric":
        raise WrongModelError(f"{type(model).__name__} is not a dielectric model")
    scalar = np.ndim(zeta) == 0
    z = np.asarray(zeta, dtype=float)
    if np.any(z < 0):
        raise DomainError("zeta must be non-negative")
    if isinstance(model, Tabulated):
        if np.any(z == 0):
            raise DivergentPermittivityError(
                "tabulated eps(i zeta) is not evaluated at zeta = 0; use a zero-frequency "
                "prescription")
        out = kk_transform(model.table, z).value
    else:
        if np.any(z == 0):
            raise DivergentPermittivityError(
                f"{model.name} permittivity diverges at zeta = 0; use a zero-frequency "
                "prescription")
        p = model.params
        if isinstance(model, Plasma):
            out = 1.0 + (p.omega_p / z) ** 2
        else:
            out = 1.0 + p.omega_p ** 2 / (z * (z + p.omega_tau))
    return float(out) if scalar else out


def z_infrared(params, zeta):
    return zeta / np.sqrt(params.omega_p ** 2 + zeta ** 2)


def z_normal_skin(params, zeta):
    return np.sqrt(zeta * params.omega_tau) / params.omega_p


def z_anomalous_skin(params, zeta):
    return np.cbrt(params.v_over_c * (zeta / params.omega_p) ** 2)


_REGIME_FORMS = {
    Regime.NORMAL_SKIN: z_normal_skin,
    Regime.ANOMALOUS_SKIN: z_anomalous_skin,
    Regime.INFRARED: z_infrared,
}


def regime_codes(breakpoints, zeta):
    """Regime selected at each frequency: 0 normal skin, 1 anomalous, 2 infrared."""
    z = np.asarray(zeta, dtype=float)
    code = np.where(z < breakpoints.ns_upper, 0, 2)
    if not breakpoints.anomalous_band_empty:
        code = np.where((z >= breakpoints.ns_upper) & (z < breakpoints.as_upper), 1, code)
    return code


_CODE_REGIME = (Regime.NORMAL_SKIN, Regime.ANOMALOUS_SKIN, Regime.INFRARED)


def _matched_values(params, breakpoints, z):
    code = regime_codes(breakpoints, z)
    return np.choose(code, [z_normal_skin(params, z), z_anomalous_skin(params, z),
                            z_infrared(params, z)]), code


def impedance_imag_axis(model, zeta):
    """Dimensionless surface impedance ``Z(i zeta)`` (real, non-negative)."""
    if model.family != "impedance":
        raise WrongModelError(f"{type(model).__name__} is not an impedance model")
    scalar = np.ndim(zeta) == 0
    z = np.asarray(zeta, dtype=float)
    if np.any(z < 0):
        raise DomainError("zeta must be non-negative")
    p = model.params
    if isinstance(model, ImpedanceInfrared):
        out = z_infrared(p, z)
    elif isinstance(model, ImpedanceNormalSkin):
        out = z_normal_skin(p, z)
    elif isinstance(model, ImpedanceAnomalousSkin):
        out = z_anomalous_skin(p, z)
    else:
        out, _ = _matched_values(p, model.breakpoints, z)
    return float(out) if scalar else out


@dataclass(frozen=True)
class MatchedImpedance:
    value: float
    regime: Regime
    breakpoint: float
    jump: float


def matched_impedance(params, breakpoints, zeta):
    """Impedance in the regime that matches ``zeta``.

    Also reports the nearest regime boundary and the size of the
    discontinuity of ``Z`` across it.
    """
    if not zeta >= 0:
        raise DomainError("zeta must be non-negative")
    value, code = _matched_values(params, breakpoints, np.asarray(float(zeta)))
    regime = _CODE_REGIME[int(code)]

    if breakpoints.anomalous_band_empty:
        edges = [(breakpoints.ns_upper, Regime.NORMAL_SKIN, Regime.INFRARED)]
    else:
        edges = [(breakpoints.ns_upper, Regime.NORMAL_SKIN, Regime.ANOMALOUS_SKIN),
                 (breakpoints.as_upper, Regime.ANOMALOUS_SKIN, Regime.INFRARED)]
    b, below, above = min(edges, key=lambda e: abs(math.log(e[0]) - math.log(zeta))
                          if zeta > 0 else e[0])
    jump = abs(float(_REGIME_FORMS[above](params, b)) - float(_REGIME_FORMS[below](params, b)))
    return MatchedImpedance(float(value), regime, b, jump)
