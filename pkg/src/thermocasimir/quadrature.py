"""Batched, globally vectorised adaptive Gauss-Kronrod quadrature.

Many independent one-dimensional integrals (one per Matsubara term, or one
per outer node of a nested integral) are refined simultaneously: every
round evaluates the 21-point Kronrod rule on all unfinished panels with a
single call of the integrand, so the integrand must accept arrays.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

# Gauss-Kronrod (10, 21) abscissae on [-1, 1], non-negative half, descending.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at the odd positions of the Kronrod set.
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny


@dataclass(frozen=True)
class BatchResult:
    values: np.ndarray
    errors: np.ndarray
    panels: np.ndarray


def gauss_kronrod_panels(f, lo, hi, owner):
    """Apply the 21-point Kronrod rule to panels ``[lo, hi]``.

    Returns the Kronrod estimate and a QUADPACK-style error estimate for
    every panel.  ``owner`` is forwarded to ``f`` so it knows which
    integral each abscissa belongs to.
    """
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t = centre[:, None] + half[:, None] * NODES[None, :]
    idx = np.broadcast_to(owner[:, None], t.shape)
    fv = np.asarray(f(t.ravel(), idx.ravel()), dtype=float).reshape(t.shape)

    # row-wise sums rather than BLAS so a panel's result never depends on
    # how many other panels share the call
    kronrod = (fv * KRONROD_WEIGHTS).sum(axis=1)
    gauss = (fv * GAUSS_WEIGHTS).sum(axis=1)
    mean = 0.5 * kronrod
    resabs = (np.abs(fv) * KRONROD_WEIGHTS).sum(axis=1)
    resasc = (np.abs(fv - mean[:, None]) * KRONROD_WEIGHTS).sum(axis=1)

    err = np.abs(kronrod - gauss)
    scale = np.abs(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(resasc > 0, (200.0 * err / resasc) ** 1.5, 0.0)
    err = np.where((resasc > 0) & (err > 0), resasc * np.minimum(1.0, ratio), err)
    floor = 50.0 * _EPMACH * resabs
    err = np.where(resabs > _UFLOW / (50.0 * _EPMACH), np.maximum(floor, err), err)
    return kronrod * half, err * scale


def integrate_batch(f, lower, upper, rel_tol=1e-8, abs_tol=0.0, max_subdivisions=200,
                    initial_panels=4):
    """Integrate ``f`` over ``[lower[i], upper[i]]`` for every ``i``.

    Parameters
    ----------
    f : callable
        ``f(t, i)`` with ``t`` a float array and ``i`` the matching integral
        indices; returns the integrand values.
    lower, upper : array_like
        Integration limits; empty intervals (``upper <= lower``) give 0.
    rel_tol, abs_tol : float or array_like
        Panel refinement stops for integral ``i`` once its accumulated error
        estimate is below ``max(abs_tol[i], rel_tol * |I_i|)``.
    max_subdivisions : int
        Maximum number of panels per integral.

    Returns
    -------
    BatchResult
        Values, error estimates and the number of panels used.

    Raises
    ------
    ConvergenceError
        If some integral needs more than ``max_subdivisions`` panels; the
        partial :class:`BatchResult` is attached.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    m = lower.size
    abs_tol = np.broadcast_to(np.asarray(abs_tol, dtype=float), (m,))

    values = np.zeros(m)
    errors = np.zeros(m)
    counts = np.zeros(m, dtype=int)

    live = np.flatnonzero(upper > lower)
    k = max(1, int(initial_panels))
    edges = lower[live, None] + (upper - lower)[live, None] * (np.arange(k + 1) / k)[None, :]
    edges[:, -1] = upper[live]
    lo = edges[:, :-1].ravel()
    hi = edges[:, 1:].ravel()
    owner = np.repeat(live, k)
    counts[live] = k

    # accepted contributions per integral
    done_val = np.zeros(m)
    done_err = np.zeros(m)
    failed = False

    while lo.size:
        val, err = gauss_kronrod_panels(f, lo, hi, owner)
        cur_val = done_val + np.bincount(owner, val, minlength=m)
        cur_err = done_err + np.bincount(owner, err, minlength=m)
        tol = np.maximum(abs_tol, rel_tol * np.abs(cur_val))
        length = upper - lower

        finished = cur_err <= tol
        width = hi - lo
        share = tol[owner] * width / length[owner]
        accept = finished[owner] | (err <= share) | (width <= 1e3 * _EPMACH * np.abs(lo))
        capped = counts[owner] >= max_subdivisions
        if np.any(capped & ~accept):
            failed = True
            accept = accept | capped

        np.add.at(done_val, owner[accept], val[accept])
        np.add.at(done_err, owner[accept], err[accept])

        refine = ~accept
        if not np.any(refine):
            break
        lo_r, hi_r, own_r = lo[refine], hi[refine], owner[refine]
        mid = 0.5 * (lo_r + hi_r)
        np.add.at(counts, own_r, 1)
        lo = np.concatenate([lo_r, mid])
        hi = np.concatenate([mid, hi_r])
        owner = np.concatenate([own_r, own_r])

    values[:] = done_val
    errors[:] = done_err
    result = BatchResult(values, errors, counts)
    if failed:
        raise ConvergenceError(
            f"adaptive quadrature exceeded {max_subdivisions} subdivisions", partial=result)
    return result


def integrate(f, lower, upper, rel_tol=1e-8, abs_tol=0.0, max_subdivisions=200):
    """Scalar convenience wrapper around :func:`integrate_batch`.

    ``f`` takes a single array argument.  Returns ``(value, error)``.
    """
    res = integrate_batch(lambda t, i: f(t), [lower], [upper], rel_tol, abs_tol,
                          max_subdivisions)
    return float(res.values[0]), float(res.errors[0])
