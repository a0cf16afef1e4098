"""Tolerances, grids and small numerical building blocks."""

from __future__ import annotations

import numpy as np

# Tolerance policy, used everywhere.
ANALYTIC_TOL = 1e-12
QUADRATURE_TOL = 1e-6
MC_SIGMAS = 3.0
DET_TOL = 1e-9
TIE_TOL = 1e-12
H_CHECK_TOL = 1e-10

VALIDATION_POINTS = 512
VALIDATION_SPAN = 40.0


def validation_grid(theta: float, n: int = VALIDATION_POINTS) -> np.ndarray:
    """Zero plus a geometric grid reaching ``40/theta``."""
    hi = VALIDATION_SPAN / theta
    return np.concatenate(([0.0], np.geomspace(hi * 1e-6, hi, n - 1)))


def geometric_grid(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 2 or not 0 < lo < hi:
        raise ValueError("geometric grid needs 0 < lo < hi and n >= 2")
    return np.geomspace(lo, hi, n)


def as_float_array(x):
    return np.asarray(x, dtype=float)


def scalar_or_array(out, *inputs):
    """Return a Python float when every input was a scalar."""
    if all(np.ndim(v) == 0 for v in inputs):
        return float(np.asarray(out).reshape(()))
    return out


def fd_step(x, rel=1e-5, floor=1e-5):
    return np.maximum(floor, rel * np.abs(x))


def derivative(fn, x, step=None, order: int = 1):
    """Richardson-extrapolated central difference of a vectorized ``fn``.

    Falls back to a one-sided second-order stencil when ``x - 2*step`` would
    leave ``[0, inf)``.
    """
    x = as_float_array(x)
    h = fd_step(x) if step is None else np.broadcast_to(np.asarray(step, float), x.shape)
    if order == 1:
        def central(hh):
            return (fn(x + hh) - fn(x - hh)) / (2 * hh)

        def forward(hh):
            return (-3 * fn(x) + 4 * fn(x + hh) - fn(x + 2 * hh)) / (2 * hh)
    elif order == 2:
        def central(hh):
            return (fn(x + hh) - 2 * fn(x) + fn(x - hh)) / hh**2

        def forward(hh):
            return (2 * fn(x) - 5 * fn(x + hh) + 4 * fn(x + 2 * hh) - fn(x + 3 * hh)) / hh**2
    else:
        raise ValueError("order must be 1 or 2")
    inside = x - 2 * h >= 0
    out = np.empty(np.broadcast(x, h).shape)
    if np.any(inside):
        c1, c2 = central(h), central(h / 2)
        out = np.where(inside, (4 * c2 - c1) / 3, out)
    if np.any(~inside):
        f1, f2 = forward(h), forward(h / 2)
        out = np.where(inside, out, (4 * f2 - f1) / 3)
    return out


def solve_increasing(fn, dfn, targets, lo, hi=None, rtol=1e-14, maxiter=200):
    """Solve ``fn(x) = target`` for a nondecreasing vectorized ``fn`` on ``[lo, inf)``.

    Bracketed bisection refined by Newton steps; ``dfn`` may be ``None``
    for pure bisection. Targets at or below ``fn(lo)`` return ``lo``.
    """
    y = as_float_array(targets).ravel()
    lo_arr = np.full(y.shape, float(lo))
    out = np.full(y.shape, float(lo))
    active = y > fn(lo_arr)
    if not np.any(active):
        return out.reshape(np.shape(targets))
    idx = np.flatnonzero(active)
    yt = y[idx]
    a = lo_arr[idx].copy()
    b = np.full(yt.shape, float(hi) if hi is not None else max(1.0, 2 * abs(lo)))
    for _ in range(2100):
        fb = fn(b)
        grow = fb < yt
        if not np.any(grow):
            break
        a = np.where(grow, b, a)
        b = np.where(grow, 2 * b + 1.0, b)
    else:
        raise ArithmeticError("could not bracket root")
    x = 0.5 * (a + b)
    for _ in range(maxiter):
        fx = fn(x)
        below = fx < yt
        a = np.where(below, x, a)
        b = np.where(below, b, x)
        mid = 0.5 * (a + b)
        if dfn is not None:
            d = dfn(x)
            with np.errstate(divide="ignore", invalid="ignore"):
                nx = x - (fx - yt) / d
            ok = np.isfinite(nx) & (nx > a) & (nx < b)
            nx = np.where(ok, nx, mid)
        else:
            nx = mid
        done = np.abs(nx - x) <= rtol * np.maximum(1.0, np.abs(x))
        done |= (b - a) <= rtol * np.maximum(1.0, np.abs(b))
        x = nx
        if np.all(done):
            break
    out[idx] = x
    return out.reshape(np.shape(targets))


def classify(worst: float, tol: float, band: float) -> str:
    """Three-way verdict: ``pass`` above ``-tol``, ``fail`` below ``-band``."""
    if worst >= -tol:
        return "pass"
    if worst < -band:
        return "fail"
    return "inconclusive"
