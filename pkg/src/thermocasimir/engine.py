"""Lifshitz free energy, zero-temperature energy and pressure for two plates.

Every integral is written in the dimensionless variable ``t = 2 a y``; the
lower limit of Matsubara term ``n`` is ``x_n = 2 a zeta_n / c``.  Terms are
independent integrals refined together by
:func:`thermocasimir.quadrature.integrate_batch` and reduced in ascending
``n`` with :func:`math.fsum`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import materials as mat
from .errors import ConvergenceError, DomainError, ValidationError
from .quadrature import integrate_batch
from .reflection import dielectric_sq, impedance_sq, n0_dimensionless, resolve_prescription
from .units import C, HBAR, K_B

ZETA3 = 1.2020569031595942853997381615114


@dataclass(frozen=True)
class QuadratureSettings:
    """Numerical controls.

    ``abs_tol`` is an absolute tolerance in J/m^2 applied to every
    Matsubara term; ``matsubara_tail_tol`` bounds the dropped tail relative
    to the partial sum.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-20
    max_subdivisions: int = 200
    tail_cutoff: float = 60.0
    matsubara_tail_tol: float = 1e-10
    max_terms: int = 1_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "matsubara_tail_tol"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if not self.tail_cutoff >= 30:
            raise ValidationError("tail_cutoff must be at least 30")
        if self.max_subdivisions < 1 or self.max_terms < 1:
            raise ValidationError("max_subdivisions and max_terms must be positive")


DEFAULT_SETTINGS = QuadratureSettings()


@dataclass(frozen=True)
class FreeEnergyResult:
    value: float
    n_terms: int
    quad_error: float
    tail_bound: float


@dataclass(frozen=True)
class PressureResult:
    """Pressure from the differentiated integrand and from -dF/da."""

    analytic: float
    finite_difference: float
    discrepancy: float
    n_terms: int
    quad_error: float
    tail_bound: float

    @property
    def value(self):
        return self.analytic


def _check_aT(a, T=None):
    if not a > 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    if T is not None and not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")


def log_integrand(r_sq, x):
    """``ln(1 - r_sq exp(-x))`` without cancellation for small or large ``x``."""
    scalar = np.ndim(r_sq) == 0 and np.ndim(x) == 0
    r_sq = np.asarray(r_sq, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any((r_sq == 1) & (x == 0)):
        raise DomainError("ln(1 - r^2 e^-x) is singular at r^2 = 1, x = 0")
    out = _log1m(r_sq, x)
    return float(out) if scalar else out


def _one_minus(r_sq, x):
    # 1 - r e^-x written as (1 - r) + r (1 - e^-x)
    return (1.0 - r_sq) - r_sq * np.expm1(-x)


def _log1m(r_sq, x):
    u = r_sq * np.exp(-x)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(u < 0.5, np.log1p(-u), np.log(_one_minus(r_sq, x)))


def _ratio(r_sq, x):
    """``r e^-x / (1 - r e^-x)``, the pressure kernel."""
    return r_sq * np.exp(-x) / _one_minus(r_sq, x)


def _response(model, zeta):
    """Per-frequency material data: ('ideal'|'dielectric'|'impedance', values)."""
    if model.family == "ideal":
        return "ideal", None
    if model.family == "dielectric":
        return "dielectric", np.asarray(mat.eps_imag_axis(model, zeta), dtype=float)
    return "impedance", np.asarray(mat.impedance_imag_axis(model, zeta), dtype=float)


def _coefficients(kind, values, x, t):
    if kind == "ideal":
        one = np.ones_like(t)
        return one, one
    if kind == "dielectric":
        return dielectric_sq(values, x, t)
    return impedance_sq(values, x, t)


def _integrand(kind_of_sum, r_par, r_perp, t):
    if kind_of_sum == "energy":
        return t * (_log1m(r_par, t) + _log1m(r_perp, t))
    return t * t * (_ratio(r_par, t) + _ratio(r_perp, t))


def _term_integrals(n, a, T, model, prescription, settings, quantity="energy"):
    """Dimensionless integrals of the Matsubara terms ``n`` (sorted array).

    Returns ``(values, errors)``; the physical term is the value times
    :func:`_prefactor`.
    """
    n = np.asarray(n, dtype=np.int64)
    delta = 4.0 * math.pi * K_B * T * a / (HBAR * C)
    x = n * delta
    zeta = n * (2.0 * math.pi * K_B * T / HBAR)
    two_a_over_c = 2.0 * a / C
    pref = _prefactor(n, a, T, quantity)

    positive = n > 0
    kind, values = "ideal", None
    if np.any(positive):
        kind, vals = _response(model, zeta[positive])
        if vals is not None:
            values = np.zeros(n.size)
            values[positive] = vals
    zero_rule = None
    if np.any(~positive):
        zero_rule = resolve_prescription(prescription, model)

    def f(t, idx):
        out = np.empty_like(t)
        at0 = n[idx] == 0
        if np.any(at0):
            rp, rs = n0_dimensionless(zero_rule, t[at0], two_a_over_c)
            out[at0] = _integrand(quantity, rp, rs, t[at0])
        rest = ~at0
        if np.any(rest):
            i = idx[rest]
            v = None if values is None else values[i]
            rp, rs = _coefficients(kind, v, x[i], t[rest])
            out[rest] = _integrand(quantity, rp, rs, t[rest])
        return out

    lower = x
    upper = np.full(n.size, settings.tail_cutoff)
    abs_tol = settings.abs_tol / np.abs(pref)
    try:
        res = integrate_batch(f, lower, upper, settings.rel_tol, abs_tol,
                              settings.max_subdivisions)
    except ConvergenceError as exc:
        part = exc.partial
        raise ConvergenceError(
            f"Matsubara term integrals did not converge at a={a!r}, T={T!r}: {exc}",
            partial=float(np.sum(part.values * pref))) from exc
    return res.values, res.errors


def _prefactor(n, a, T, quantity):
    w = np.where(np.asarray(n) == 0, 0.5, 1.0)
    if quantity == "energy":
        return K_B * T / (2.0 * math.pi) * w / (4.0 * a * a)
    return -K_B * T / math.pi * w / (8.0 * a ** 3)


def matsubara_term(n, a, T, model, prescription, settings=DEFAULT_SETTINGS):
    """Contribution of Matsubara index ``n`` to the free energy (J/m^2).

    Includes the half weight of ``n = 0``.
    """
    _check_aT(a, T)
    if n < 0:
        raise DomainError("Matsubara index must be non-negative")
    vals, _ = _term_integrals([n], a, T, model, prescription, settings)
    return float(vals[0] * _prefactor(n, a, T, "energy"))


def tail_bound(N, a, T, quantity="energy"):
    """Upper bound (safety factor 2) on ``|sum_{n >= N} term_n|``.

    Uses ``|r|^2 <= 1``, ``-ln(1 - e^-t) <= e^-t / (1 - e^-x_N)`` and the
    monotone decay of the per-term bound, so the sum over ``n > N`` is
    dominated by an integral over ``x``.
    """
    N = np.asarray(N, dtype=float)
    delta = 4.0 * math.pi * K_B * T * a / (HBAR * C)
    xN = N * delta
    with np.errstate(divide="ignore", over="ignore"):
        g = 1.0 / -np.expm1(-xN)
        if quantity == "energy":
            head = (xN + 1.0)
            rest = (xN + 2.0) / delta
            scale = K_B * T / (4.0 * math.pi * a * a)
        else:
            head = xN * xN + 2.0 * xN + 2.0
            rest = (xN * xN + 4.0 * xN + 6.0) / delta
            scale = K_B * T / (4.0 * math.pi * a ** 3)
        out = 2.0 * scale * g * (head + rest) * np.exp(-xN)
    return np.where(N > 0, out, np.inf)


def _matsubara_sum(a, T, model, prescription, settings, quantity, workers=None,
                   chunk=1024):
    _check_aT(a, T)
    workers = workers or int(os.environ.get("THERMOCASIMIR_THREADS", "1") or 1)
    delta = 4.0 * math.pi * K_B * T * a / (HBAR * C)

    def compute(lo_hi):
        lo, hi = lo_hi
        n = np.arange(lo, hi)
        vals, errs = _term_integrals(n, a, T, model, prescription, settings, quantity)
        pref = _prefactor(n, a, T, quantity)
        return vals * pref, np.abs(errs * pref)

    def guess(partial):
        # smallest N whose tail bound is below tol * |partial|
        target = settings.matsubara_tail_tol * abs(partial)
        if target <= 0:
            return None
        lo, hi = 1, 2
        while tail_bound(hi, a, T, quantity) > target:
            hi *= 2
            if hi > 4 * settings.max_terms:
                return hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if tail_bound(mid, a, T, quantity) > target:
                lo = mid
            else:
                hi = mid
        return hi

    terms = []
    errs = []
    start = 0
    running = 0.0
    # n = 0 alone gives a lower bound on |F| and so an upper bound on N
    goal = None
    executor = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while True:
            if goal is None:
                blocks = [(0, 1)]
            else:
                stop = min(goal, settings.max_terms)
                edges = list(range(start, stop, chunk)) + [stop]
                blocks = list(zip(edges[:-1], edges[1:]))[:max(workers, 1)]
            if not blocks or blocks[0][0] >= blocks[0][1]:
                break
            mapper = executor.map if executor else map
            for v, e in mapper(compute, blocks):
                terms.append(v)
                errs.append(e)
            start = blocks[-1][1]

            allterms = np.concatenate(terms)
            partial = np.cumsum(allterms)
            idx = np.arange(1, allterms.size + 1)
            ok = np.flatnonzero(tail_bound(idx, a, T, quantity)
                                <= settings.matsubara_tail_tol * np.abs(partial))
            if ok.size:
                N = int(idx[ok[0]])
                break
            goal = guess(partial[-1])
            if start >= settings.max_terms:
                N = None
                break
            if goal is not None and goal <= start:
                goal = start + chunk
    finally:
        if executor:
            executor.shutdown()

    allterms = np.concatenate(terms)
    allerrs = np.concatenate(errs)
    if N is None:
        value = math.fsum(allterms)
        bound = float(tail_bound(allterms.size, a, T, quantity))
        raise ConvergenceError(
            f"Matsubara sum needs more than max_terms={settings.max_terms} terms",
            partial=FreeEnergyResult(value, allterms.size, math.fsum(allerrs), bound))
    value = math.fsum(allterms[:N])
    return value, N, math.fsum(allerrs[:N]), float(tail_bound(N, a, T, quantity)), allterms[:N]


def free_energy(a, T, model, prescription, settings=DEFAULT_SETTINGS, workers=None):
    """Casimir free energy per unit area (J/m^2) between two identical plates.

    Terms are summed in ascending Matsubara index until the analytic tail
    bound drops below ``settings.matsubara_tail_tol`` times the partial sum.
    ``workers`` threads may evaluate blocks of terms; the result does not
    depend on it.
    """
    value, N, qerr, bound, _ = _matsubara_sum(a, T, model, prescription, settings, "energy",
                                              workers)
    return FreeEnergyResult(value, N, qerr, bound)


def free_energy_terms(a, T, model, prescription, settings=DEFAULT_SETTINGS):
    """Per-term contributions used by :func:`free_energy`, in ascending order."""
    return _matsubara_sum(a, T, model, prescription, settings, "energy")[4]


def zero_T_energy(a, model, settings=DEFAULT_SETTINGS, full_output=False):
    """Casimir energy per unit area at T = 0 (J/m^2).

    The frequency integral is mapped to ``u in (0, 1)`` by
    ``zeta = (c / 2a) u / (1 - u)`` and split at regime breakpoints of
    matched impedance models.  With ``full_output`` the pair
    ``(value, error_estimate)`` is returned.
    """
    _check_aT(a)
    cutoff = settings.tail_cutoff
    gap = C / (2.0 * a)
    inner_rel = settings.rel_tol * 0.1
    worst_inner = [0.0]

    def inner(u, idx):
        xs = u / (1.0 - u)
        zeta = gap * xs
        kind, values = _response(model, zeta)

        def f(t, j):
            v = None if values is None else values[j]
            rp, rs = _coefficients(kind, v, xs[j], t)
            return _integrand("energy", rp, rs, t)

        res = integrate_batch(f, xs, np.full(xs.size, cutoff), inner_rel, 0.0,
                              settings.max_subdivisions)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(res.values != 0, res.errors / np.abs(res.values), 0.0)
        worst_inner[0] = max(worst_inner[0], float(rel.max(initial=0.0)))
        return res.values / (1.0 - u) ** 2

    u_max = cutoff / (1.0 + cutoff)
    edges = [0.0]
    if isinstance(model, mat.ImpedanceMatched):
        bp = model.breakpoints
        for b in sorted({bp.ns_upper, bp.as_upper}):
            xb = b / gap
            ub = xb / (1.0 + xb)
            if 0 < ub < u_max:
                edges.append(ub)
    edges.append(u_max)
    scale = HBAR / (16.0 * math.pi ** 2 * a * a) * gap
    try:
        res = integrate_batch(inner, edges[:-1], edges[1:], settings.rel_tol,
                              settings.abs_tol / scale, settings.max_subdivisions)
    except ConvergenceError as exc:
        raise ConvergenceError(f"zero-temperature integral did not converge: {exc}",
                               partial=float(np.sum(exc.partial.values)) * scale) from exc
    value = math.fsum(res.values) * scale
    error = (math.fsum(res.errors) * scale) + worst_inner[0] * abs(value)
    if full_output:
        return value, error
    return value


def pressure(a, T, model, prescription, settings=DEFAULT_SETTINGS, step=0.01,
             workers=None):
    """Casimir pressure (Pa, negative = attraction), computed two ways.

    ``analytic`` differentiates the integrand with respect to ``a``;
    ``finite_difference`` is the five-point stencil of ``-dF/da`` with
    step ``step * a``.
    """
    _check_aT(a, T)
    value, N, qerr, bound, _ = _matsubara_sum(a, T, model, prescription, settings,
                                              "pressure", workers)
    h = step * a
    F = [free_energy(a + k * h, T, model, prescription, settings, workers).value
         for k in (-2, -1, 1, 2)]
    dFda = (F[0] - 8.0 * F[1] + 8.0 * F[2] - F[3]) / (12.0 * h)
    fd = -dFda
    return PressureResult(value, fd, abs(value - fd) / abs(value), N, qerr, bound)


def ideal_zero_T_energy(a):
    """``-pi^2 hbar c / (720 a^3)``."""
    return -math.pi ** 2 * HBAR * C / (720.0 * a ** 3)


def ideal_zero_T_pressure(a):
    return -math.pi ** 2 * HBAR * C / (240.0 * a ** 4)


def ideal_classical_energy(a, T):
    """High-temperature limit ``-k T zeta(3) / (8 pi a^2)`` of the ideal metal."""
    return -K_B * T * ZETA3 / (8.0 * math.pi * a * a)
