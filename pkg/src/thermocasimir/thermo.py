"""Temperature correction, entropy, Nernst-theorem check and method comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import materials as mat
from .engine import DEFAULT_SETTINGS, QuadratureSettings, free_energy, zero_T_energy
from .errors import DomainError, ValidationError
from .reflection import Auto, resolve_prescription
from .units import HBAR, K_B, characteristic_frequency

# The entropy is a small difference of large free energies: at 1 K and 1 um it
# is ~1e-9 of F/T, so the default quadrature and tail tolerances are tightened.
ENTROPY_SETTINGS = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-40, matsubara_tail_tol=1e-14)


@dataclass(frozen=True)
class TemperatureCorrection:
    delta_F: float
    relative: float
    free_energy: float
    zero_T: float
    error: float
    n_terms: int


def temperature_correction(a, T, model, prescription, settings=DEFAULT_SETTINGS):
    """``F(a, T) - E(a)`` and its ratio to ``|E(a)|``.

    ``error`` adds the quadrature error estimates of both parts and the
    Matsubara tail bound.
    """
    F = free_energy(a, T, model, prescription, settings)
    E, E_err = zero_T_energy(a, model, settings, full_output=True)
    dF = F.value - E
    return TemperatureCorrection(dF, dF / abs(E), F.value, E,
                                 F.quad_error + F.tail_bound + E_err, F.n_terms)


@dataclass(frozen=True)
class EntropyResult:
    S: float
    stencil_h: float
    richardson_error: float
    coarse: float
    fine: float
    warning: str | None = None


def default_step(T):
    """Stencil step ``max(0.01 T, 0.5 K)``, capped at ``T / 4``."""
    return min(max(0.01 * T, 0.5), 0.25 * T)


def entropy(a, T, model, prescription, settings=None, h=None):
    """Interaction entropy ``S = -dF/dT`` per unit area, J/(m^2 K).

    Central differences with steps ``h`` and ``h/2`` are combined by
    Richardson extrapolation; their difference is returned as
    ``richardson_error``.
    """
    settings = settings or ENTROPY_SETTINGS
    h = default_step(T) if h is None else h
    if not (h > 0 and T - 2 * h > 0):
        raise DomainError(f"need 0 < h < T/2, got T={T!r}, h={h!r}")

    def F(temp):
        return free_energy(a, temp, model, prescription, settings).value

    coarse = -(F(T + h) - F(T - h)) / (2.0 * h)
    fine = -(F(T + 0.5 * h) - F(T - 0.5 * h)) / h
    S = (4.0 * fine - coarse) / 3.0
    err = abs(fine - coarse)
    warning = None
    if err > 0.1 * abs(S):
        warning = f"stencil step {h:g} K too large: Richardson error is {err / abs(S):.0%} of S"
    return EntropyResult(S, h, err, coarse, fine, warning)


@dataclass(frozen=True)
class NernstReport:
    T: tuple
    S: tuple
    richardson_error: tuple
    fit_T: tuple
    intercept: float
    intercept_error: float
    exponent: float
    amplitude: float
    passed: bool
    warnings: tuple = field(default=())


def _fit_intercept(T, S, sigma, exponents=np.arange(0.1, 4.0001, 0.01)):
    """Fit ``S = s0 + A T**p`` by weighted least squares, profiling over ``p``.

    Returns ``(s0, sigma_s0, p, A)``; ``sigma_s0`` is inflated by the reduced
    chi-square when the fit is worse than the stated uncertainties.
    """
    w = 1.0 / sigma
    best = None
    for p in exponents:
        X = np.column_stack([np.ones_like(T), T ** p]) * w[:, None]
        coef, *_ = np.linalg.lstsq(X, S * w, rcond=None)
        chi2 = float(np.sum((X @ coef - S * w) ** 2))
        if best is None or chi2 < best[0]:
            best = (chi2, p, coef, X)
    chi2, p, coef, X = best
    cov = np.linalg.inv(X.T @ X)
    dof = max(T.size - 3, 1)
    scale = max(1.0, chi2 / dof)
    return float(coef[0]), math.sqrt(cov[0, 0] * scale), float(p), float(coef[1])


def nernst_check(a, model, prescription, settings=None, T_grid=(1, 2, 5, 10, 20, 50)):
    """Check that the entropy extrapolates to zero as T -> 0.

    ``|S|`` is fitted on the lowest decade of ``T_grid`` (at least four
    points) with ``s0 + A T**p``.  The check passes when the intercept
    ``s0`` lies within three standard errors of zero.
    """
    T_grid = np.asarray(T_grid, dtype=float)
    if T_grid.size < 4:
        raise ValidationError("nernst_check needs at least 4 temperatures")
    if np.any(np.diff(T_grid) <= 0) or not T_grid[0] > 0:
        raise ValidationError("T_grid must be positive and strictly ascending")

    results = [entropy(a, T, model, prescription, settings) for T in T_grid]
    S = np.array([r.S for r in results])
    err = np.array([r.richardson_error for r in results])

    sel = T_grid <= 10.0 * T_grid[0] * (1 + 1e-12)
    if sel.sum() < 4:
        sel = np.arange(T_grid.size) < 4
    absS = np.abs(S[sel])
    sigma = np.maximum(err[sel], 1e-12 * absS.max())
    s0, ds0, p, A = _fit_intercept(T_grid[sel], absS, sigma)
    passed = abs(s0) <= 3.0 * ds0
    return NernstReport(tuple(T_grid), tuple(S), tuple(err), tuple(T_grid[sel]), s0, ds0, p, A,
                        passed, tuple(r.warning for r in results if r.warning))


@dataclass(frozen=True)
class ComparisonRow:
    a: float
    method: str
    omega_c: float
    prescription: str
    free_energy: float
    zero_T: float
    delta_F: float
    relative: float
    n_terms: int
    regimes: str


METHODS = ("GKM-recipe", "matched", "drude", "plasma")


def gkm_model(params, a, breakpoints=None):
    """Single impedance chosen from the gap frequency and used at every ``n``.

    This is the fixed-impedance recipe being compared against, not a
    recommendation.
    """
    bp = breakpoints or mat.RegimeBreakpoints.default_for(params)
    code = int(mat.regime_codes(bp, characteristic_frequency(a)))
    cls = (mat.ImpedanceNormalSkin, mat.ImpedanceAnomalousSkin, mat.ImpedanceInfrared)[code]
    return cls(params)


def _method_model(method, params, a, breakpoints):
    if method == "GKM-recipe":
        return gkm_model(params, a, breakpoints)
    if method == "matched":
        return mat.ImpedanceMatched(params, breakpoints)
    if method == "drude":
        return mat.Drude(params)
    if method == "plasma":
        return mat.Plasma(params)
    raise ValueError(f"unknown method {method!r}")


def regime_runs(model, n_terms, T):
    """Run-length summary ``regime:first-last`` of the regime used for n >= 1."""
    if n_terms <= 1:
        return ""
    zeta = np.arange(1, n_terms) * (2.0 * math.pi * K_B * T / HBAR)
    if isinstance(model, mat.ImpedanceMatched):
        codes = mat.regime_codes(model.breakpoints, zeta)
        names = [r.value for r in (mat.Regime.NORMAL_SKIN, mat.Regime.ANOMALOUS_SKIN,
                                   mat.Regime.INFRARED)]
        labels = [names[c] for c in codes]
    else:
        labels = [model.name] * (n_terms - 1)
    runs = []
    start = 1
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[i - 1]:
            runs.append(f"{labels[i - 1]}:{start}-{i}")
            start = i + 1
    return ";".join(runs)


def prescription_comparison(a_values, T, params, settings=DEFAULT_SETTINGS, breakpoints=None):
    """Free energy and temperature correction for the four methods at each ``a``.

    Rows are ordered by ``a`` (as given) and then by :data:`METHODS`; every
    method uses its ``Auto`` zero-frequency prescription.
    """
    if not len(a_values):
        raise ValidationError("a_values must not be empty")
    rows = []
    for a in a_values:
        if not a > 0:
            raise DomainError(f"separation must be positive, got {a!r}")
        for method in METHODS:
            model = _method_model(method, params, a, breakpoints)
            rule = resolve_prescription(Auto(), model)
            tc = temperature_correction(a, T, model, Auto(), settings)
            rows.append(ComparisonRow(a, method, characteristic_frequency(a), rule.label,
                                      tc.free_energy, tc.zero_T, tc.delta_F, tc.relative,
                                      tc.n_terms, regime_runs(model, tc.n_terms, T)))
    return rows
