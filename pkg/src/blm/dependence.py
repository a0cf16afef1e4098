"""Total positivity and dependence diagnostics on finite grids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from ._numeric import (
    ANALYTIC_TOL,
    DET_TOL,
    as_float_array,
    classify,
    derivative,
    scalar_or_array,
)
from .core import BlmDistribution
from .errors import ArgumentError, DomainError, PreconditionError
from .reports import GridReport
from .univariate import aging_class


@dataclass(frozen=True)
class Grid:
    """Finite witness set: strictly increasing ``xs`` and ``ys``."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float).ravel()
        ys = np.asarray(self.ys, dtype=float).ravel()
        for nm, v in (("xs", xs), ("ys", ys)):
            if v.size < 2:
                raise ArgumentError(f"grid axis {nm} needs at least 2 points")
            if np.any(np.diff(v) <= 0) or not np.all(np.isfinite(v)):
                raise ArgumentError(f"grid axis {nm} must be finite and strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @classmethod
    def geometric(cls, theta: float, n: int = 20, lo: float = 0.05, hi: float = 8.0):
        """``n`` geometric points per axis over ``[lo/theta, hi/theta]``."""
        pts = np.geomspace(lo / theta, hi / theta, n)
        return cls(pts, pts.copy())

    @classmethod
    def off_diagonal(cls, theta: float, n: int = 20, lo: float = 0.05, hi: float = 8.0):
        """Like :meth:`geometric` with ``ys`` shifted half a step, so no ``x == y``."""
        xs = np.geomspace(lo / theta, hi / theta, n)
        ratio = (hi / lo) ** (1.0 / (n - 1))
        return cls(xs, xs * math.sqrt(ratio))

    @classmethod
    def unit(cls, n: int = 20, lo: float = 0.02, hi: float = 0.98):
        pts = np.linspace(lo, hi, n)
        return cls(pts, pts.copy())

    @property
    def shape(self):
        return (self.xs.size, self.ys.size)


@dataclass(frozen=True)
class Kernel:
    """A bivariate function ``fn(x, y)`` (vectorized) with a label."""

    fn: Callable
    label: str = "kernel"
    meta: dict = field(default_factory=dict)

    def __call__(self, x, y):
        return self.fn(x, y)

    def matrix(self, grid: Grid) -> np.ndarray:
        X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
        try:
            K = np.asarray(self.fn(X, Y), dtype=float)
        except Exception as exc:
            for x, y in zip(X.ravel(), Y.ravel()):
                try:
                    self.fn(np.array([x]), np.array([y]))
                except Exception:
                    raise type(exc)(f"{self.label} failed at (x, y) = ({x:.6g}, {y:.6g}): "
                                    f"{exc}") from exc
            raise
        K = np.broadcast_to(K, X.shape)
        bad = ~np.isfinite(K)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise DomainError(f"{self.label} is not finite at "
                              f"(x, y) = ({grid.xs[i]:.6g}, {grid.ys[j]:.6g})")
        return np.ascontiguousarray(K)


def survival_kernel(d) -> Kernel:
    return Kernel(d.survival, f"survival[{getattr(d, 'name', 'H')}]")


def cdf_kernel(d) -> Kernel:
    def fn(x, y):
        x, y = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        return (1.0 - as_float_array(d.F.survival(x)) - as_float_array(d.G.survival(y))
                + as_float_array(d.survival(x, y)))
    return Kernel(fn, f"cdf[{getattr(d, 'name', 'H')}]")


def density_kernel(d) -> Kernel:
    return Kernel(d.density, f"density[{getattr(d, 'name', 'H')}]")


def survival_copula_kernel(d) -> Kernel:
    return Kernel(lambda u, v: survival_copula(d, u, v), f"survival_copula[{getattr(d, 'name', 'H')}]")


def symmetric_kernel(phi: Callable, psi: Callable, label: str = "symmetric") -> Kernel:
    """``psi(x) phi(y)`` for ``y <= x`` and ``phi(x) psi(y)`` for ``x <= y``."""
    def fn(x, y):
        x, y = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        return np.where(y <= x, psi(x) * phi(y), phi(x) * psi(y))
    return Kernel(fn, label)


def product_kernel(u: Callable, v: Callable, base: Kernel | None = None) -> Kernel:
    """``u(x) v(y) K(x, y)`` (``K = 1`` when ``base`` is omitted)."""
    if base is None:
        return Kernel(lambda x, y: u(x) * v(y), "product")
    return Kernel(lambda x, y: u(x) * v(y) * base(x, y), f"product*{base.label}")


# ---------------------------------------------------------------------------
# determinant scans

def _as_kernel(k) -> Kernel:
    if isinstance(k, Kernel):
        return k
    if callable(k):
        return Kernel(k, getattr(k, "__name__", "kernel"))
    raise ArgumentError("expected a Kernel or a callable")


def _two_by_two(k, g: Grid, tol: float, sign: float, label: str) -> GridReport:
    k = _as_kernel(k)
    K = k.matrix(g)
    worst, i1, i2, j1, j2, count = kernels.tp2_scan(K, sign)
    witness = (float(g.xs[i1]), float(g.xs[i2]), float(g.ys[j1]), float(g.ys[j2]))
    verdict = "fail" if worst < -tol else "pass"
    details = {"kernel": k.label, "near_zero": bool(abs(worst) <= tol)}
    return GridReport(verdict, float(worst), witness, int(count), tol, label, details)


def tp2_check(k, g: Grid, tol: float = DET_TOL) -> GridReport:
    """All 2x2 minors ``K(x1,y1)K(x2,y2) - K(x1,y2)K(x2,y1)`` nonnegative.

    Minors are divided by the product of their row maxima, so ``tol`` is
    relative. The witness is ``(x1, x2, y1, y2)`` of the smallest minor.
    """
    return _two_by_two(k, g, tol, 1.0, "TP2")


def rr2_check(k, g: Grid, tol: float = DET_TOL) -> GridReport:
    """Mirror of :func:`tp2_check`: all 2x2 minors nonpositive."""
    return _two_by_two(k, g, tol, -1.0, "RR2")


def _minors(K, rows, cols):
    sub = K[rows[:, :, None], cols[:, None, :]]
    scale = np.prod(np.max(np.abs(sub), axis=2), axis=1)
    det = np.linalg.det(sub)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(scale > 0, det / scale, 0.0)


def tp_order_check(k, g: Grid, r: int, tol: float = DET_TOL, trials: int = 200,
                   seed: int = 0) -> GridReport:
    """Minors of every order ``2..r``: random increasing index sets plus windows.

    For each order ``s`` all contiguous ``s x s`` windows are tested, plus
    ``trials`` random increasing row/column selections. A failure is a proof
    of violation on the grid; a pass is evidence only.
    """
    if int(r) != r or r < 2:
        raise ArgumentError("order r must be an integer >= 2")
    n, m = g.shape
    if r > min(n, m):
        raise ArgumentError(f"grid {n}x{m} too small for order {r}")
    k = _as_kernel(k)
    K = k.matrix(g)
    rng = np.random.default_rng(seed)
    worst, witness, count = math.inf, (), 0
    per_order = {}
    for s in range(2, int(r) + 1):
        wi = np.arange(n - s + 1)[:, None] + np.arange(s)
        wj = np.arange(m - s + 1)[:, None] + np.arange(s)
        rows = np.repeat(wi, wj.shape[0], axis=0)
        cols = np.tile(wj, (wi.shape[0], 1))
        rr = np.sort(np.array([rng.choice(n, s, replace=False) for _ in range(trials)]), axis=1)
        cc = np.sort(np.array([rng.choice(m, s, replace=False) for _ in range(trials)]), axis=1)
        rows = np.concatenate((rows, rr))
        cols = np.concatenate((cols, cc))
        vals = _minors(K, rows, cols)
        a = int(np.argmin(vals))
        per_order[s] = float(vals[a])
        count += vals.size
        if vals[a] < worst:
            worst = float(vals[a])
            witness = (tuple(g.xs[rows[a]].tolist()), tuple(g.ys[cols[a]].tolist()))
    verdict = "fail" if worst < -tol else "pass"
    return GridReport(verdict, worst, witness, count, tol, f"TP{int(r)}",
                      {"kernel": k.label, "worst_by_order": per_order})


# ---------------------------------------------------------------------------
# analytic characterizations

def _condition_points(g: Grid) -> np.ndarray:
    """Grid points together with all positive pairwise differences."""
    pts = np.concatenate((g.xs, g.ys))
    diffs = np.abs(pts[:, None] - pts[None, :]).ravel()
    allp = np.unique(np.concatenate((pts, diffs)))
    return allp[allp > 0]


def theorem6_condition(d: BlmDistribution, g: Grid, tol: float = DET_TOL) -> GridReport:
    """Both marginals IFR and ``Fbar(x) Gbar(x) <= exp(-theta x)``.

    Checked at the grid points and at every pairwise difference of them
    (the arguments at which the survival cross-ratios probe the marginals).
    This is the analytic counterpart of ``tp2_check(survival_kernel(d))``.
    """
    pts = _condition_points(g)
    reports = {"F_IFR": aging_class(d.F, "IFR", pts), "G_IFR": aging_class(d.G, "IFR", pts)}
    prod = as_float_array(d.F.survival(pts)) * as_float_array(d.G.survival(pts))
    with np.errstate(over="ignore", invalid="ignore"):
        bound = 1.0 - prod * np.exp(d.theta * pts)
    k = int(np.argmin(bound))
    margins = [reports["F_IFR"].worst_value, reports["G_IFR"].worst_value, float(bound[k])]
    wit = [("F_IFR",) + tuple(reports["F_IFR"].witness),
           ("G_IFR",) + tuple(reports["G_IFR"].witness), ("product_bound", float(pts[k]))]
    j = int(np.argmin(margins))
    fails = {
        "F_IFR": reports["F_IFR"].worst_value < -tol,
        "G_IFR": reports["G_IFR"].worst_value < -tol,
        "product_bound": float(bound[k]) < -tol,
    }
    verdict = "fail" if any(fails.values()) else "pass"
    return GridReport(verdict, float(margins[j]), wit[j], int(3 * pts.size), tol,
                      "theorem6", {"components": {"F_IFR": margins[0], "G_IFR": margins[1],
                                                  "product_bound": margins[2]},
                                   "failed": [k_ for k_, v in fails.items() if v]})


def _h_derivatives(d: BlmDistribution, which: int, x):
    """``h``, ``h'`` and ``h''`` for ``h = theta f + f'`` (or with ``g``)."""
    m = d.F if which == 1 else d.G
    th = d.theta
    x = as_float_array(x)
    try:
        f = [as_float_array(m.density_derivative_n(x, n)) for n in range(4)]
        return th * f[0] + f[1], th * f[1] + f[2], th * f[2] + f[3]
    except ArgumentError:
        pass
    h = (lambda u: as_float_array(d.h1(u))) if which == 1 else (lambda u: as_float_array(d.h2(u)))
    return h(x), derivative(h, x), derivative(h, x, order=2)


def theorem7_density_condition(d: BlmDistribution, grid, tol: float = DET_TOL) -> GridReport:
    """Density TP2 conditions for an absolutely continuous BLM law.

    (i) ``h_i'^2 >= h_i'' h_i`` (reported as the normalized
    ``(h'^2 - h'' h)/h^2``), (ii) ``h_1 h_2 <= h_1(0+) h_2(0+) exp(-theta x)``,
    plus the compatibility ``h_1(0+) == h_2(0+)``.
    """
    if d.atom_mass() > ANALYTIC_TOL:
        raise PreconditionError(f"law has diagonal mass {d.atom_mass():.3g}; "
                                "density condition needs an absolutely continuous law")
    xs = np.asarray(grid.xs if isinstance(grid, Grid) else grid, dtype=float).ravel()
    if xs.size == 0 or np.any(xs <= 0):
        raise ArgumentError("grid must be nonempty and positive")
    hs = {}
    for i in (1, 2):
        h, dh, d2h = _h_derivatives(d, i, xs)
        if np.any(h <= 0):
            k = int(np.argmax(h <= 0))
            raise PreconditionError(f"h{i} is not positive at x={xs[k]:.6g}")
        hs[i] = (h, dh, d2h)
    h10 = float(d.h1(0.0))
    h20 = float(d.h2(0.0))
    compat_gap = (h10 - h20) / max(abs(h10), abs(h20), 1e-300)
    compatible = abs(compat_gap) <= 1e-9
    margins, witnesses = [], []
    for i in (1, 2):
        h, dh, d2h = hs[i]
        gamma = (dh * dh - d2h * h) / (h * h)
        margins.append(gamma)
        witnesses += [(f"log_concavity_h{i}", float(x)) for x in xs]
    ratio = hs[1][0] * hs[2][0] * np.exp(d.theta * xs) / (h10 * h20)
    margins.append(1.0 - ratio)
    witnesses += [("product_bound", float(x)) for x in xs]
    flat = np.concatenate(margins)
    k = int(np.argmin(flat))
    worst = float(flat[k])
    verdict = "pass" if worst >= -tol and compatible else "fail"
    return GridReport(verdict, worst, witnesses[k], int(flat.size), tol, "theorem7",
                      {"compatible": compatible, "h1_0": h10, "h2_0": h20,
                       "compatibility_gap": compat_gap})


def local_dependence(obj, x, y, step: float | None = None) -> float:
    """``d^2 log K / dx dy`` at an off-diagonal point.

    For a :class:`BlmDistribution` the closed form
    ``(h'(u)^2 - h''(u) h(u)) / h(u)^2`` at ``u = |x - y|`` is used; for any
    other kernel, Richardson-extrapolated central differences.
    """
    x, y = float(x), float(y)
    if x == y:
        raise DomainError("local dependence is undefined on the diagonal")
    if isinstance(obj, BlmDistribution):
        which = 1 if x > y else 2
        h, dh, d2h = (float(v) for v in _h_derivatives(obj, which, abs(x - y)))
        if h <= 0:
            raise DomainError(f"density vanishes near ({x}, {y})")
        return (dh * dh - d2h * h) / (h * h)
    k = _as_kernel(obj)

    def logk(a, b):
        v = np.asarray(k(np.asarray(a, float), np.asarray(b, float)), dtype=float)
        if np.any(v <= 0):
            raise DomainError(f"kernel is not positive near ({x}, {y})")
        return np.log(v)

    h0 = step if step is not None else max(1e-3, 1e-3 * max(abs(x), abs(y)))
    if x != y:
        h0 = min(h0, abs(x - y) / 4.0)

    def mixed(h):
        return (logk(x + h, y + h) - logk(x + h, y - h) - logk(x - h, y + h)
                + logk(x - h, y - h)) / (4 * h * h)

    return float((4 * mixed(h0 / 2) - mixed(h0)) / 3)


def pqd_check(d, g: Grid, tol: float = ANALYTIC_TOL) -> GridReport:
    """``H(x, y) >= Fbar(x) Gbar(y)`` on the grid."""
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    m = as_float_array(d.survival(X, Y)) - as_float_array(d.F.survival(X)) * \
        as_float_array(d.G.survival(Y))
    wit = list(zip(X.ravel().tolist(), Y.ravel().tolist()))
    return GridReport.from_margins(m.ravel(), wit, tol, "PQD")


def survival_copula(d, u, v):
    """``C(u, v) = H(Fbar^{-1}(u), Gbar^{-1}(v))`` for ``u, v`` in ``(0, 1)``."""
    ua, va = as_float_array(u), as_float_array(v)
    for nm, a in (("u", ua), ("v", va)):
        if np.any((a <= 0) | (a >= 1) | np.isnan(a)):
            raise ArgumentError(f"{nm} must lie in (0, 1)")
    x = as_float_array(d.F.isf(ua))
    y = as_float_array(d.G.isf(va))
    return scalar_or_array(d.survival(x, y), u, v)


def iff_verdict(report: GridReport, band: float = 1e-6) -> str:
    """Three-way reading of a report: pass, fail, or inconclusive near zero."""
    return classify(report.worst_value, report.tolerance, band)
