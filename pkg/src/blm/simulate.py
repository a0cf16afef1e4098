"""Exact samplers, Monte Carlo estimators and goodness-of-fit statistics.

Three samplers produce draws of ``(X, Y)``: the exponential shock model,
the shock model with arbitrary arrival laws, and a universal sampler for
any valid BLM law that draws ``min(X, Y) ~ Exp(theta)`` and an independent
difference ``X - Y`` from its mixed law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import kernels
from ._numeric import as_float_array, solve_increasing
from .core import BlmDistribution
from .errors import ArgumentError, PreconditionError, SamplerError
from .families import GmoDistribution, MoParams
from .univariate import _expoly_diff, _expoly_merge

KS_C01 = 1.628
MIN_ESTIMATE_N = 100


@dataclass
class RngStream:
    """Reproducible random stream keyed by ``(seed, stream)``.

    Distinct ``stream`` ids give statistically independent substreams of one
    seed; the same pair always replays the same sequence.
    """

    seed: int
    stream: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ArgumentError("seed must be an integer in [0, 2**64)")
        if int(self.stream) != self.stream or self.stream < 0:
            raise ArgumentError("stream id must be a nonnegative integer")
        self.seed, self.stream = int(self.seed), int(self.stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, k: int) -> "RngStream":
        return RngStream(self.seed, k)


def _as_rng(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        raise ArgumentError("an RngStream or integer seed is required")
    return RngStream(rng)


@dataclass(frozen=True)
class SampleBatch:
    """Immutable batch of draws with provenance."""

    x: np.ndarray
    y: np.ndarray
    sampler_id: str
    seed: int
    stream: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ArgumentError("x and y must be 1-D arrays of equal length")
        if np.any(~(x >= 0)) or np.any(~(y >= 0)):
            raise ArgumentError("sample coordinates must be nonnegative")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def pairs(self) -> np.ndarray:
        return np.column_stack((self.x, self.y))

    @classmethod
    def concatenate(cls, batches) -> "SampleBatch":
        """Join batches from independent substreams of one sampler."""
        batches = list(batches)
        if not batches:
            raise ArgumentError("nothing to concatenate")
        ids = {b.sampler_id for b in batches}
        if len(ids) != 1:
            raise ArgumentError(f"batches come from different samplers: {sorted(ids)}")
        first = batches[0]
        return cls(np.concatenate([b.x for b in batches]), np.concatenate([b.y for b in batches]),
                   first.sampler_id, first.seed, first.stream, dict(first.params))


def _check_n(n):
    if int(n) != n or n < 1:
        raise ArgumentError("n must be a positive integer")
    return int(n)


def sample_mo(p, n: int, rng) -> SampleBatch:
    """``(min(X1, X3), min(X2, X3))`` with independent exponential shocks."""
    if not isinstance(p, MoParams):
        p = MoParams(*p)
    n = _check_n(n)
    rs = _as_rng(rng)
    g = rs.generator
    x1 = g.exponential(1.0 / p.lambda1, n)
    x2 = g.exponential(1.0 / p.lambda2, n)
    x3 = g.exponential(1.0 / p.lambda12, n)
    params = {"lambda1": p.lambda1, "lambda2": p.lambda2, "lambda12": p.lambda12}
    return SampleBatch(np.minimum(x1, x3), np.minimum(x2, x3), "mo_shock", rs.seed, rs.stream,
                       params)


def sample_gmo(d: GmoDistribution, n: int, rng) -> SampleBatch:
    """Shock model with general arrival laws, by inverse transform of each law."""
    n = _check_n(n)
    rs = _as_rng(rng)
    u = rs.generator.random((3, n))
    # isf(1 - u) keeps u = 0 finite; u in [0, 1) maps to (0, 1]
    x1, x2, x3 = (as_float_array(F.isf(1.0 - ui)) for F, ui in zip((d.F1, d.F2, d.F3), u))
    return SampleBatch(np.minimum(x1, x3), np.minimum(x2, x3), "gmo_shock", rs.seed, rs.stream,
                       dict(d.spec or {}))


def _tail_expoly(m, theta):
    """Terms of ``Fbar(t) - f(t)/theta`` when the marginal is an exp-polynomial."""
    terms = m.expoly()
    if terms is None:
        return None
    c, p, r = terms
    dc, dp, dr = _expoly_diff(c, p, r)
    tc, tp, tr = _expoly_merge(np.concatenate([c, dc / theta]), np.concatenate([p, dp]),
                               np.concatenate([r, dr]))
    keep = np.abs(tc) > 1e-14 * max(1.0, float(np.max(np.abs(tc), initial=0.0)))
    return tc[keep], tp[keep], tr[keep]


def _solve_tail(fn, dfn, v, u, lo, side):
    try:
        return solve_increasing(fn, dfn, -np.log(v), lo, rtol=1e-12)
    except ArithmeticError:
        k = int(np.argmin(v))
        raise SamplerError(f"tail inversion failed for {side} at target {v[k]:.3e}",
                           uniform=float(u[k])) from None


def _invert_tail(d: BlmDistribution, side: str, v: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Solve ``P(D_side > t) = v`` for ``t`` (``D_side`` is ``X - Y`` or ``Y - X``)."""
    m = d.F if side == "X_minus_Y" else d.G
    hfn = d.h1 if side == "X_minus_Y" else d.h2
    th = d.theta
    terms = _tail_expoly(m, th)
    if terms is not None and terms[0].size:
        t = kernels.expoly_isf(*terms, v, 0.0)
    elif hasattr(m, "hazard_derivative"):
        # T = S (1 - r/theta): one cumulative-hazard lookup per evaluation
        def neg_log_tail(t):
            r = as_float_array(m.hazard(t))
            with np.errstate(divide="ignore", invalid="ignore"):
                return as_float_array(m.cumulative_hazard(t)) - np.log1p(-np.minimum(r, th) / th)

        def slope(t):
            r = as_float_array(m.hazard(t))
            with np.errstate(divide="ignore", invalid="ignore"):
                return r + as_float_array(m.hazard_derivative(t)) / (th - r)

        t = _solve_tail(neg_log_tail, slope, v, u, m.left_extremity, side)
    else:
        def neg_log_tail(t):
            tail = as_float_array(m.survival(t)) - as_float_array(m.density(t)) / th
            with np.errstate(divide="ignore"):
                return -np.log(np.maximum(tail, 0.0))

        def slope(t):
            tail = as_float_array(m.survival(t)) - as_float_array(m.density(t)) / th
            with np.errstate(divide="ignore", invalid="ignore"):
                return as_float_array(hfn(t)) / (th * tail)

        t = _solve_tail(neg_log_tail, slope, v, u, m.left_extremity, side)
    t = as_float_array(t)
    bad = ~np.isfinite(t)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise SamplerError(f"tail inversion diverged for {side} at target {v[k]:.3e}",
                           uniform=float(u[k]))
    return t


def sample_blm(d: BlmDistribution, n: int, rng) -> SampleBatch:
    """Universal sampler for a valid BLM law.

    ``Z ~ Exp(theta)`` and, independently, ``D = X - Y`` from its law: one
    uniform draw is split into ``[0, p-)`` (left tail), ``[p-, p- + atom)``
    (``D = 0``) and the rest (right tail), with ``p- = 1 - g(0)/theta``. The
    tails ``P(D > t) = Fbar(t) - f(t)/theta`` (and the mirror with ``G``)
    are inverted numerically. Returns ``(Z + max(D, 0), Z + max(-D, 0))``.
    """
    if not isinstance(d, BlmDistribution):
        raise ArgumentError("sample_blm needs a BlmDistribution")
    if not d.valid:
        raise PreconditionError("sample_blm needs a valid BLM law")
    n = _check_n(n)
    rs = _as_rng(rng)
    g = rs.generator
    th = d.theta
    z = g.exponential(1.0 / th, n)
    u = g.random(n)
    p_left = max(0.0, 1.0 - d.g0 / th)
    p_atom = d.atom_mass()
    p_right = max(0.0, 1.0 - d.f0 / th)
    if abs(p_left + p_atom + p_right - 1.0) > 1e-9:
        raise PreconditionError("difference law does not sum to one")
    diff = np.zeros(n)
    left = u < p_left
    right = u >= p_left + p_atom
    if np.any(left):
        # v in (0, p_left], decreasing in u
        v = p_left - u[left]
        v = np.where(v > 0, v, np.nextafter(0.0, 1.0))
        diff[left] = -_invert_tail(d, "Y_minus_X", v, u[left])
    if np.any(right):
        v = 1.0 - u[right]
        diff[right] = _invert_tail(d, "X_minus_Y", v, u[right])
    x = z + np.maximum(diff, 0.0)
    y = z + np.maximum(-diff, 0.0)
    return SampleBatch(x, y, "blm_universal", rs.seed, rs.stream, dict(d.spec or {}))


# ---------------------------------------------------------------------------
# estimators

FUNCTIONALS = ("survival", "product_moment", "mttf_series", "mttf_parallel", "atom_fraction",
               "correlation")


def estimate(batch: SampleBatch, functional: str, *, x: float | None = None,
             y: float | None = None, i: int = 1, j: int = 1,
             atom_eps: float = 0.0) -> tuple[float, float]:
    """Plug-in Monte Carlo estimate and its standard error.

    ``survival`` needs ``x`` and ``y``; ``product_moment`` uses powers
    ``i`` and ``j``; ``atom_fraction`` counts ``|x - y| <= atom_eps`` (exact
    ties by default, which is what both samplers produce). ``correlation``
    is the Pearson coefficient with its influence-function standard error.
    """
    if functional not in FUNCTIONALS:
        raise ArgumentError(f"functional must be one of {FUNCTIONALS}")
    if batch.n < MIN_ESTIMATE_N:
        raise PreconditionError(f"estimates need n >= {MIN_ESTIMATE_N}; got {batch.n}")
    X, Y = batch.x, batch.y
    if functional == "correlation":
        xs = (X - X.mean()) / X.std()
        ys = (Y - Y.mean()) / Y.std()
        rho = float(np.mean(xs * ys))
        psi = xs * ys - 0.5 * rho * (xs**2 + ys**2)
        return rho, float(psi.std(ddof=1) / math.sqrt(batch.n))
    if functional == "survival":
        if x is None or y is None:
            raise ArgumentError("survival needs x and y")
        vals = ((X > x) & (Y > y)).astype(float)
    elif functional == "product_moment":
        vals = X**i * Y**j
    elif functional == "mttf_series":
        vals = np.minimum(X, Y)
    elif functional == "mttf_parallel":
        vals = np.maximum(X, Y)
    else:
        vals = (np.abs(X - Y) <= atom_eps).astype(float)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(batch.n))


@dataclass(frozen=True)
class TestResult:
    """Outcome of a goodness-of-fit or independence statistic."""

    __test__ = False  # not a pytest class

    statistic: float
    critical: float
    passed: bool
    pvalue: float | None = None


def ks_statistic(samples, reference_cdf) -> TestResult:
    """One-sample Kolmogorov-Smirnov distance; passes iff below ``1.628/sqrt(n)``."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    n = s.size
    if n < MIN_ESTIMATE_N:
        raise PreconditionError(f"KS needs n >= {MIN_ESTIMATE_N}; got {n}")
    F = as_float_array(reference_cdf(s))
    k = np.arange(1, n + 1)
    stat = float(max(np.max(k / n - F), np.max(F - (k - 1) / n)))
    crit = KS_C01 / math.sqrt(n)
    return TestResult(stat, crit, stat < crit)


def ks_two_sample(a, b, level: float = 0.01) -> TestResult:
    """Two-sample KS test; passes iff the p-value exceeds ``level``."""
    res = stats.ks_2samp(np.asarray(a, float), np.asarray(b, float))
    return TestResult(float(res.statistic), float("nan"), bool(res.pvalue > level),
                      float(res.pvalue))


def _quantile_bins(v, bins):
    edges = np.unique(np.quantile(v, np.linspace(0, 1, bins + 1)[1:-1]))
    return np.searchsorted(edges, v, side="right")


def chi2_independence(a, b, bins: int = 4, quantile: float = 0.999) -> TestResult:
    """Pearson chi-square independence test on quantile bins of ``a`` and ``b``.

    Coinciding quantile edges (from atoms) are merged, so fewer than
    ``bins`` categories may be used on an axis.
    """
    a, b = np.asarray(a, float).ravel(), np.asarray(b, float).ravel()
    if a.shape != b.shape:
        raise ArgumentError("samples must have equal length")
    ia, ib = _quantile_bins(a, bins), _quantile_bins(b, bins)
    table = np.zeros((ia.max() + 1, ib.max() + 1))
    np.add.at(table, (ia, ib), 1.0)
    table = table[table.sum(1) > 0][:, table.sum(0) > 0]
    if min(table.shape) < 2:
        raise PreconditionError("independence test needs two categories on each axis")
    stat, pval, dof, _ = stats.chi2_contingency(table, correction=False)
    crit = float(stats.chi2.ppf(quantile, dof))
    return TestResult(float(stat), crit, bool(stat < crit), float(pval))
