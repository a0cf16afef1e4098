"""NumPy implementations of the hot kernels (fallback for ``_ckernels``)."""

import numpy as np


def expoly_eval(coef, power, rate, t):
    """``sum_i coef[i] * t**power[i] * exp(-rate[i] * t)`` and its t-derivative."""
    t = np.asarray(t, dtype=float)[..., None]
    e = np.exp(-rate * t)
    tp = np.where(power == 0, 1.0, t ** power)
    val = np.sum(coef * tp * e, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        tpm1 = np.where(power == 0, 0.0, power * t ** np.maximum(power - 1, 0))
    der = np.sum(coef * e * (tpm1 - rate * tp), axis=-1)
    return val, der


def expoly_isf(coef, power, rate, targets, lower=0.0, rtol=1e-15, maxiter=200):
    """Invert a decreasing exponential-polynomial sum.

    Returns ``t >= lower`` with ``T(t) = target`` where ``T`` is the sum
    described by ``coef``, ``power`` and ``rate``. Targets at or above
    ``T(lower)`` map to ``lower``; nonpositive targets map to ``inf``.
    Newton on ``log T`` inside a bisection bracket.
    """
    coef = np.asarray(coef, dtype=float)
    power = np.asarray(power, dtype=np.int64)
    rate = np.asarray(rate, dtype=float)
    y = np.asarray(targets, dtype=float)
    shape = y.shape
    y = y.ravel()
    out = np.full(y.shape, float(lower))
    t_lo_val, _ = expoly_eval(coef, power, rate, np.full(1, float(lower)))
    out[y <= 0] = np.inf
    act = np.flatnonzero((y > 0) & (y < t_lo_val[0]))
    if act.size == 0:
        return out.reshape(shape)
    ly = np.log(y[act])
    a = np.full(act.shape, float(lower))
    b = np.full(act.shape, max(1.0, 2.0 * lower))
    for _ in range(2000):
        vb, _ = expoly_eval(coef, power, rate, b)
        grow = vb >= y[act]
        if not grow.any():
            break
        a = np.where(grow, b, a)
        b = np.where(grow, 2.0 * b, b)
    x = 0.5 * (a + b)
    for _ in range(maxiter):
        v, d = expoly_eval(coef, power, rate, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(v > 0, np.log(np.where(v > 0, v, 1.0)) - ly, -np.inf)
            above = g > 0
            a = np.where(above, x, a)
            b = np.where(above, b, x)
            nx = x - g * v / d
        mid = 0.5 * (a + b)
        ok = np.isfinite(nx) & (nx > a) & (nx < b)
        nx = np.where(ok, nx, mid)
        nx = np.where(g == 0, x, nx)
        scale = np.maximum(1.0, np.abs(nx))
        done = (np.abs(nx - x) <= rtol * scale) | (b - a <= 4e-16 * scale) | (g == 0)
        x = nx
        if done.all():
            break
    out[act] = x
    return out.reshape(shape)


def tp2_scan(K, sign=1.0):
    """Smallest normalized 2x2 minor of ``K`` over all increasing index pairs.

    The minor for rows ``i1 < i2`` and columns ``j1 < j2`` is
    ``sign * (K[i1,j1] K[i2,j2] - K[i1,j2] K[i2,j1])`` divided by the product
    of its row maxima. Returns ``(worst, i1, i2, j1, j2, count)``.
    """
    K = np.asarray(K, dtype=float)
    n, m = K.shape
    j1, j2 = np.triu_indices(m, 1)
    worst = np.inf
    arg = (0, 0, 0, 0)
    for i1 in range(n - 1):
        r1 = K[i1]
        r2 = K[i1 + 1:]
        a11 = r1[j1]
        a12 = r1[j2]
        a21 = r2[:, j1]
        a22 = r2[:, j2]
        det = sign * (a11 * a22 - a12 * a21)
        scale = np.maximum(a11, a12) * np.maximum(a21, a22)
        with np.errstate(divide="ignore", invalid="ignore"):
            norm = np.where(scale > 0, det / scale, 0.0)
        k = np.argmin(norm)
        val = norm.flat[k]
        if val < worst:
            r, c = np.unravel_index(k, norm.shape)
            worst = float(val)
            arg = (i1, i1 + 1 + int(r), int(j1[c]), int(j2[c]))
    count = (n * (n - 1) // 2) * (m * (m - 1) // 2)
    return (worst,) + arg + (count,)
