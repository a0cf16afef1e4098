"""Univariate lifetime laws on [0, inf) and aging-class checks."""

from __future__ import annotations

import math
import warnings
from abc import ABC, abstractmethod

import numpy as np
from scipy import integrate, special

from . import kernels
from ._numeric import (
    ANALYTIC_TOL,
    TIE_TOL,
    as_float_array,
    derivative,
    scalar_or_array,
    solve_increasing,
)
from .errors import ArgumentError, DomainError
from .reports import GridReport

_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)
_GL8_X, _GL8_W = np.polynomial.legendre.leggauss(8)


def _check_prob(p, upper_open=True):
    p = as_float_array(p)
    bad = (p < 0) | (p >= 1) if upper_open else (p <= 0) | (p > 1)
    if np.any(bad | np.isnan(p)):
        rng = "[0, 1)" if upper_open else "(0, 1]"
        raise ArgumentError(f"probability outside {rng}: {p[bad].ravel()[:3]}")
    return p


class MarginalDistribution(ABC):
    """A lifetime law on ``[0, inf)``.

    Subclasses supply ``survival`` and ``density``; everything else has a
    numerical default that closed-form laws override.
    """

    left_extremity = 0.0
    #: Supremum of ``s`` with a finite mgf, when known in closed form.
    mgf_abscissa: float | None = None

    @abstractmethod
    def survival(self, x):
        """P(X > x)."""

    @abstractmethod
    def density(self, x):
        """Density of X (right-hand derivative of the cdf)."""

    def cdf(self, x):
        return scalar_or_array(1.0 - as_float_array(self.survival(x)), x)

    def density_derivative(self, x):
        return scalar_or_array(derivative(self.density, as_float_array(x)), x)

    def density_derivative_n(self, x, n: int):
        """n-th derivative of the density for ``n`` in 0..2."""
        if n == 0:
            return self.density(x)
        if n == 1:
            return self.density_derivative(x)
        if n == 2:
            return scalar_or_array(derivative(self.density_derivative, as_float_array(x)), x)
        raise ArgumentError("only derivatives up to order 2 are available")

    def hazard(self, x):
        x = as_float_array(x)
        s = as_float_array(self.survival(x))
        if np.any(s <= 0):
            raise DomainError(f"survival vanishes at x={x[s <= 0].ravel()[:3]}; hazard undefined")
        return scalar_or_array(as_float_array(self.density(x)) / s, x)

    def cumulative_hazard(self, x):
        with np.errstate(divide="ignore"):
            return scalar_or_array(-np.log(as_float_array(self.survival(x))), x)

    def isf(self, u):
        """Inverse survival function: smallest x with ``survival(x) <= u``."""
        u = _check_prob(u, upper_open=False)
        targets = -np.log(u)
        x = solve_increasing(self.cumulative_hazard, self._hazard_or_inf, targets,
                             self.left_extremity)
        return scalar_or_array(x, u)

    def _hazard_or_inf(self, x):
        s = as_float_array(self.survival(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(s > 0, as_float_array(self.density(x)) / s, np.inf)

    def quantile(self, p):
        """Generalized inverse of the cdf on ``[0, 1)``."""
        p = _check_prob(p)
        out = np.full(p.shape, float(self.left_extremity))
        pos = p > 0
        if np.any(pos):
            out[pos] = as_float_array(self.isf(1.0 - p[pos]))
        return scalar_or_array(out, p)

    def raw_moment(self, k: int) -> float:
        """E[X**k] for integer ``k >= 1``."""
        _check_order(k)
        fn = lambda x: k * x ** (k - 1) * self._sf1(x)
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(fn, 0, np.inf, limit=400, epsabs=0, epsrel=1e-12)
            except integrate.IntegrationWarning as exc:
                raise DomainError(f"moment of order {k} appears infinite: {exc}") from None
        if not np.isfinite(val) or err > 1e-6 * max(1.0, abs(val)):
            raise DomainError(f"moment of order {k} appears infinite")
        return float(val)

    def mean(self) -> float:
        return self.raw_moment(1)

    def variance(self) -> float:
        m1 = self.raw_moment(1)
        return self.raw_moment(2) - m1 * m1

    def lst(self, s):
        """Laplace-Stieltjes transform E[exp(-s X)] for ``s >= 0``."""
        if s < 0:
            raise ArgumentError("Laplace transform needs s >= 0")
        if s == 0:
            return 1.0
        val, _ = integrate.quad(lambda x: self._sf1(x) * math.exp(-s * x), 0, np.inf,
                                limit=400, epsabs=0, epsrel=1e-12)
        return 1.0 - s * val

    def mgf(self, s):
        """E[exp(s X)]; raises :class:`DomainError` where it diverges."""
        if s <= 0:
            return self.lst(-s)
        if self.mgf_abscissa is not None and s >= self.mgf_abscissa:
            raise DomainError(f"mgf of {self!r} diverges at s={s}")
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(lambda x: self._sf1(x) * math.exp(s * x), 0, np.inf,
                                          limit=400, epsabs=0, epsrel=1e-12)
            except (integrate.IntegrationWarning, OverflowError):
                raise DomainError(f"mgf of {self!r} diverges at s={s}") from None
        if not np.isfinite(val):
            raise DomainError(f"mgf of {self!r} diverges at s={s}")
        return 1.0 + s * val

    def expoly(self):
        """Survival as ``(coef, power, rate)`` exponential-polynomial terms, or None."""
        return None

    def _sf1(self, x: float) -> float:
        return float(self.survival(x))

    def to_spec(self) -> dict:
        raise ArgumentError(f"{type(self).__name__} has no model-spec representation")


def _check_order(k):
    if int(k) != k or k < 1:
        raise ArgumentError("moment order must be a positive integer")


# ---------------------------------------------------------------------------
# exponential-polynomial helpers: terms c * x**p * exp(-r x)

def _expoly_diff(coef, power, rate):
    c = np.concatenate([coef * power, -coef * rate])
    p = np.concatenate([np.maximum(power - 1, 0), power])
    r = np.concatenate([rate, rate])
    keep = c != 0
    return _expoly_merge(c[keep], p[keep], r[keep])


def _expoly_merge(coef, power, rate):
    acc: dict[tuple[int, float], float] = {}
    for c, p, r in zip(coef.tolist(), power.tolist(), rate.tolist()):
        acc[(p, r)] = acc.get((p, r), 0.0) + c
    items = [(c, p, r) for (p, r), c in acc.items() if c != 0.0]
    if not items:
        return np.zeros(0), np.zeros(0, dtype=np.int64), np.zeros(0)
    c, p, r = zip(*sorted(items, key=lambda t: (t[2], t[1])))
    return np.array(c, float), np.array(p, np.int64), np.array(r, float)


def _expoly_value(terms, x):
    x = as_float_array(x)
    if terms[0].size == 0:
        return np.zeros(x.shape)
    val, _ = kernels.python.expoly_eval(*terms, np.maximum(x, 0.0))
    return val


class ExponentialMarginal(MarginalDistribution):
    """Exp(rate): survival ``exp(-rate x)``."""

    def __init__(self, rate: float):
        if not (rate > 0 and math.isfinite(rate)):
            raise ArgumentError(f"exponential rate must be positive, got {rate}")
        self.rate = float(rate)
        self.mgf_abscissa = self.rate

    def __repr__(self):
        return f"ExponentialMarginal(rate={self.rate:g})"

    def survival(self, x):
        x = as_float_array(x)
        return scalar_or_array(np.exp(-self.rate * np.maximum(x, 0.0)), x)

    def _sf1(self, x):
        return math.exp(-self.rate * x) if x > 0 else 1.0

    def density(self, x):
        x = as_float_array(x)
        return scalar_or_array(np.where(x >= 0, self.rate * np.exp(-self.rate * x), 0.0), x)

    def density_derivative(self, x):
        return self.density_derivative_n(x, 1)

    def density_derivative_n(self, x, n: int):
        x = as_float_array(x)
        val = (-self.rate) ** n * self.rate * np.exp(-self.rate * np.maximum(x, 0.0))
        return scalar_or_array(np.where(x >= 0, val, 0.0), x)

    def hazard(self, x):
        x = as_float_array(x)
        return scalar_or_array(np.full(x.shape, self.rate), x)

    def isf(self, u):
        u = _check_prob(u, upper_open=False)
        return scalar_or_array(-np.log(u) / self.rate, u)

    def quantile(self, p):
        p = _check_prob(p)
        return scalar_or_array(-np.log1p(-p) / self.rate, p)

    def raw_moment(self, k):
        _check_order(k)
        return math.factorial(k) / self.rate**k

    def lst(self, s):
        if s < 0:
            raise ArgumentError("Laplace transform needs s >= 0")
        return self.rate / (self.rate + s)

    def mgf(self, s):
        if s >= self.rate:
            raise DomainError(f"mgf of {self!r} diverges at s={s}")
        return self.rate / (self.rate - s)

    def expoly(self):
        return np.array([1.0]), np.array([0], np.int64), np.array([self.rate])

    def to_spec(self):
        return {"type": "exponential", "rate": self.rate}


class SignedErlangMixture(MarginalDistribution):
    """Signed mixture of Erlang laws.

    ``terms`` holds ``(weight, rate, shape)`` triples (``shape`` defaults to
    1). Weights may be negative but must sum to one; the resulting survival
    is checked to be a proper, nonincreasing survival function on a
    geometric grid of 512 points over ``[0, 40/min_rate]``, and the slowest
    decaying term must carry positive weight.
    """

    _kind = "signed_erlang_mixture"

    def __init__(self, terms, *, validate: bool = True):
        parsed = []
        for t in terms:
            w, r = float(t[0]), float(t[1])
            k = int(t[2]) if len(t) > 2 else 1
            if not (r > 0 and math.isfinite(r)) or k < 1:
                raise ArgumentError(f"bad mixture term {t!r}")
            if abs(w) > 1e-15:
                parsed.append((w, r, k))
        if not parsed:
            raise ArgumentError("mixture has no nonzero term")
        merged: dict[tuple[float, int], float] = {}
        for w, r, k in parsed:
            merged[(r, k)] = merged.get((r, k), 0.0) + w
        self.terms = tuple((w, r, k) for (r, k), w in sorted(merged.items()) if w != 0.0)
        total = sum(w for w, _, _ in self.terms)
        if abs(total - 1.0) > 1e-12:
            raise ArgumentError(f"mixture weights sum to {total!r}, not 1")
        self.mgf_abscissa = min(r for _, r, _ in self.terms)

        coef, power, rate = [], [], []
        for w, r, k in self.terms:
            for n in range(k):
                coef.append(w * r**n / math.factorial(n))
                power.append(n)
                rate.append(r)
        self._sf_terms = _expoly_merge(np.array(coef), np.array(power, np.int64), np.array(rate))
        self._deriv_terms = [self._sf_terms]
        for _ in range(4):
            self._deriv_terms.append(_expoly_diff(*self._deriv_terms[-1]))
        if validate:
            self._validate()

    def _validate(self):
        slow = min(r for _, r, _ in self.terms)
        lead = max((t for t in self.terms if t[1] == slow), key=lambda t: t[2])
        if lead[0] <= 0:
            raise ArgumentError("slowest-decaying mixture term has nonpositive weight; "
                                "survival turns negative in the tail")
        hi = 40.0 / slow
        grid = np.concatenate(([0.0], np.geomspace(hi * 1e-6, hi, 511)))
        s = self.survival(grid)
        if np.any(s < -ANALYTIC_TOL) or np.any(s > 1 + ANALYTIC_TOL):
            raise ArgumentError("mixture survival leaves [0, 1] on the validation grid")
        steps = np.diff(s)
        if np.any(steps > ANALYTIC_TOL):
            k = int(np.argmax(steps))
            raise ArgumentError(f"mixture survival increases near x={grid[k]:.6g}")
        if np.any(self.density(grid) < -ANALYTIC_TOL):
            raise ArgumentError("mixture density is negative on the validation grid")

    def __repr__(self):
        return f"{type(self).__name__}({list(self.terms)!r})"

    def survival(self, x):
        x = as_float_array(x)
        return scalar_or_array(np.where(x > 0, _expoly_value(self._sf_terms, x), 1.0), x)

    def _sf1(self, x):
        if x <= 0:
            return 1.0
        c, p, r = self._sf_terms
        return math.fsum(ci * x**pi * math.exp(-ri * x) for ci, pi, ri in zip(c, p, r))

    def density(self, x):
        return self.density_derivative_n(x, 0)

    def density_derivative(self, x):
        return self.density_derivative_n(x, 1)

    def density_derivative_n(self, x, n: int):
        if not 0 <= n <= 3:
            raise ArgumentError("only derivatives up to order 3 are available")
        x = as_float_array(x)
        val = -_expoly_value(self._deriv_terms[n + 1], x)
        return scalar_or_array(np.where(x >= 0, val, 0.0), x)

    def isf(self, u):
        u = _check_prob(u, upper_open=False)
        return scalar_or_array(kernels.expoly_isf(*self._sf_terms, u, 0.0), u)

    def raw_moment(self, k):
        _check_order(k)
        return math.fsum(w * math.factorial(s + k - 1) / (math.factorial(s - 1) * r**k)
                         for w, r, s in self.terms)

    def lst(self, s):
        if s < 0:
            raise ArgumentError("Laplace transform needs s >= 0")
        return math.fsum(w * (r / (r + s)) ** k for w, r, k in self.terms)

    def mgf(self, s):
        if s >= self.mgf_abscissa:
            raise DomainError(f"mgf of {self!r} diverges at s={s}")
        return math.fsum(w * (r / (r - s)) ** k for w, r, k in self.terms)

    def expoly(self):
        return self._sf_terms

    def to_spec(self):
        return {"type": "signed_mixture", "terms": [list(t) for t in self.terms]}


class SignedExponentialMixture(SignedErlangMixture):
    """Signed mixture of exponentials, ``sum_i w_i exp(-rate_i x)``.

    ``terms`` is a sequence of ``(weight, rate)`` pairs.
    """

    def __init__(self, terms, *, validate: bool = True):
        terms = list(terms)
        if any(len(t) > 2 and int(t[2]) != 1 for t in terms):
            raise ArgumentError("exponential mixture terms are (weight, rate) pairs")
        super().__init__([(t[0], t[1]) for t in terms], validate=validate)

    def __repr__(self):
        return f"SignedExponentialMixture({[(w, r) for w, r, _ in self.terms]!r})"


class LomaxMarginal(MarginalDistribution):
    """Pareto type II: survival ``(1 + x/beta)**(-alpha)``."""

    mgf_abscissa = 0.0

    def __init__(self, alpha: float, beta: float):
        if not (alpha > 0 and beta > 0 and math.isfinite(alpha) and math.isfinite(beta)):
            raise ArgumentError("Lomax parameters must be positive")
        self.alpha = float(alpha)
        self.beta = float(beta)

    def __repr__(self):
        return f"LomaxMarginal(alpha={self.alpha:g}, beta={self.beta:g})"

    def survival(self, x):
        x = np.maximum(as_float_array(x), 0.0)
        return scalar_or_array((1.0 + x / self.beta) ** (-self.alpha), x)

    def _sf1(self, x):
        return (1.0 + x / self.beta) ** (-self.alpha) if x > 0 else 1.0

    def density(self, x):
        return self.density_derivative_n(x, 0)

    def density_derivative(self, x):
        return self.density_derivative_n(x, 1)

    def density_derivative_n(self, x, n: int):
        x = as_float_array(x)
        a, b = self.alpha, self.beta
        rising = special.poch(a + 1, n)
        val = (a / b) * (-1) ** n * rising / b**n * (1.0 + np.maximum(x, 0) / b) ** (-(a + 1 + n))
        return scalar_or_array(np.where(x >= 0, val, 0.0), x)

    def hazard(self, x):
        x = as_float_array(x)
        return scalar_or_array(self.alpha / (self.beta + x), x)

    def isf(self, u):
        u = _check_prob(u, upper_open=False)
        return scalar_or_array(self.beta * np.expm1(-np.log(u) / self.alpha), u)

    def quantile(self, p):
        p = _check_prob(p)
        return scalar_or_array(self.beta * np.expm1(-np.log1p(-p) / self.alpha), p)

    def raw_moment(self, k):
        _check_order(k)
        if self.alpha <= k:
            raise DomainError(f"Lomax(alpha={self.alpha:g}) has no finite moment of order {k}")
        return float(self.beta**k * math.factorial(k)
                     * math.exp(special.gammaln(self.alpha - k) - special.gammaln(self.alpha)))

    def mgf(self, s):
        if s > 0:
            raise DomainError(f"mgf of {self!r} diverges for every s > 0")
        return self.lst(-s)

    def to_spec(self):
        return {"type": "lomax", "alpha": self.alpha, "beta": self.beta}


def _vectorized(fn):
    """Wrap a hazard callable so that it maps float arrays to float arrays."""
    probe = np.array([0.0, 0.5, 1.0])
    try:
        out = np.asarray(fn(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda x: np.asarray(fn(as_float_array(x)), dtype=float)
        if out.ndim == 0:
            return lambda x: np.broadcast_to(np.asarray(fn(as_float_array(x)), float),
                                             np.shape(x)).copy()
    except Exception:  # scalar-only callable
        pass
    vec = np.vectorize(lambda t: float(fn(t)), otypes=[float])
    return lambda x: vec(as_float_array(x))


class HazardDefinedMarginal(MarginalDistribution):
    """Law given by its hazard rate ``r``: survival ``exp(-int_0^x r)``.

    The cumulative hazard is tabulated once by adaptive composite
    Gauss-Legendre quadrature on geometric cells (split until 8- and 16-point
    rules agree); evaluation adds a 16-point rule on the partial cell.
    ``breakpoints`` become cell edges, so hazards with kinks there stay exact.
    """

    def __init__(self, hazard_fn, *, breakpoints=(), label: str | None = None):
        self.hazard_fn = hazard_fn
        self.label = label or getattr(hazard_fn, "__name__", "hazard")
        self._r = _vectorized(hazard_fn)
        self._table_points = None
        base = np.concatenate(([0.0], np.geomspace(1e-7, 1e9, 16 * 24 + 1)))
        extra = np.asarray([b for b in breakpoints if b > 0], float)
        nodes = np.unique(np.concatenate((base, extra)))
        r0 = self._r(nodes)
        if np.any(~np.isfinite(r0)) or np.any(r0 < 0):
            raise ArgumentError("hazard must be finite and nonnegative")
        self._nodes, self._cum = self._tabulate(nodes)

    def _tabulate(self, nodes):
        lo, hi = nodes[:-1], nodes[1:]
        for _ in range(30):
            c16 = self._gl(lo, hi, _GL16_X, _GL16_W)
            c8 = self._gl(lo, hi, _GL8_X, _GL8_W)
            bad = np.abs(c16 - c8) > 1e-14 * np.maximum(1e-3, np.abs(c16))
            if not np.any(bad):
                break
            mid = 0.5 * (lo[bad] + hi[bad])
            lo = np.concatenate((lo[~bad], lo[bad], mid))
            hi = np.concatenate((hi[~bad], mid, hi[bad]))
            order = np.argsort(lo)
            lo, hi = lo[order], hi[order]
        cum = np.concatenate(([0.0], np.cumsum(c16)))
        edges = np.concatenate((lo, hi[-1:]))
        # beyond this the survival underflows; keep the table short
        stop = np.searchsorted(cum, 800.0)
        stop = min(stop + 1, edges.size)
        return edges[:stop], cum[:stop]

    def _gl(self, a, b, xs, ws):
        half = 0.5 * (b - a)
        pts = (a + half)[:, None] + half[:, None] * xs[None, :]
        return half * (self._r(pts) @ ws)

    @classmethod
    def from_table(cls, points, label="hazard_table"):
        """Piecewise-linear hazard through ``(x, r)`` points, flat outside them."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ArgumentError("hazard table needs (x, rate) rows")
        if np.any(np.diff(pts[:, 0]) <= 0):
            raise ArgumentError("hazard table x values must increase strictly")
        xs, rs = pts[:, 0].copy(), pts[:, 1].copy()
        fn = lambda x: np.interp(x, xs, rs)
        obj = cls(fn, breakpoints=xs, label=label)
        obj._table_points = pts
        return obj

    def __repr__(self):
        return f"HazardDefinedMarginal({self.label})"

    def cumulative_hazard(self, x):
        x = np.maximum(as_float_array(x), 0.0)
        flat = x.ravel()
        out = np.empty(flat.shape)
        last = self._nodes[-1]
        inside = flat <= last
        if np.any(inside):
            xi = flat[inside]
            k = np.clip(np.searchsorted(self._nodes, xi, side="right") - 1, 0,
                        self._nodes.size - 1)
            a = self._nodes[k]
            out[inside] = self._cum[k] + self._gl(a, xi, _GL16_X, _GL16_W)
        for i in np.flatnonzero(~inside):
            extra, _ = integrate.quad(lambda t: float(self._r(np.array([t]))[0]), last,
                                      flat[i], limit=200)
            out[i] = self._cum[-1] + extra
        return scalar_or_array(out.reshape(x.shape), x)

    def survival(self, x):
        return scalar_or_array(np.exp(-as_float_array(self.cumulative_hazard(x))), x)

    def hazard(self, x):
        x = as_float_array(x)
        return scalar_or_array(self._r(np.maximum(x, 0.0)), x)

    def hazard_derivative(self, x):
        return scalar_or_array(derivative(self._r, np.maximum(as_float_array(x), 0.0)), x)

    def density(self, x):
        x = as_float_array(x)
        return scalar_or_array(self._r(np.maximum(x, 0.0)) * self.survival(x), x)

    def density_derivative(self, x):
        x = as_float_array(x)
        r = self._r(np.maximum(x, 0.0))
        return scalar_or_array((self.hazard_derivative(x) - r * r) * self.survival(x), x)

    def isf(self, u):
        u = _check_prob(u, upper_open=False)
        x = solve_increasing(self.cumulative_hazard, self._r, -np.log(u), 0.0)
        return scalar_or_array(x, u)

    def mgf(self, s):
        if s > 0:
            tail = self._nodes[-1]
            probe = np.linspace(0.5 * tail, tail, 64)
            if s >= float(np.min(self._r(probe))):
                raise DomainError(f"mgf of {self!r} diverges at s={s}")
        return super().mgf(s)

    def to_spec(self):
        if self._table_points is None:
            return super().to_spec()
        return {"type": "hazard_table", "points": self._table_points.tolist()}


class MinimumMarginal(MarginalDistribution):
    """Law of the minimum of independent lifetimes (survival is the product)."""

    def __init__(self, *components: MarginalDistribution):
        if not components:
            raise ArgumentError("need at least one component")
        self.components = components
        self.left_extremity = min(c.left_extremity for c in components)
        rates = [c.mgf_abscissa for c in components]
        self.mgf_abscissa = None if any(r is None for r in rates) else sum(rates)

    def __repr__(self):
        return f"MinimumMarginal{self.components!r}"

    def survival(self, x):
        x = as_float_array(x)
        out = np.ones(x.shape)
        for c in self.components:
            out = out * as_float_array(c.survival(x))
        return scalar_or_array(out, x)

    def _sf1(self, x):
        return math.prod(c._sf1(x) for c in self.components)

    def hazard(self, x):
        x = as_float_array(x)
        return scalar_or_array(sum(as_float_array(c.hazard(x)) for c in self.components), x)

    def density(self, x):
        x = as_float_array(x)
        s = as_float_array(self.survival(x))
        total = np.zeros(x.shape)
        for i, c in enumerate(self.components):
            term = as_float_array(c.density(x))
            for j, o in enumerate(self.components):
                if j != i:
                    term = term * as_float_array(o.survival(x))
            total = total + term
        return scalar_or_array(np.where(s >= 0, total, 0.0), x)


# ---------------------------------------------------------------------------
# module-level operations

def hazard(d: MarginalDistribution, x):
    """Hazard rate ``density/survival``; :class:`DomainError` where survival is 0."""
    if np.any(as_float_array(x) < 0):
        raise ArgumentError("hazard needs x >= 0")
    return d.hazard(x)


def quantile(d: MarginalDistribution, p):
    return d.quantile(p)


_AGING = {"IFR": (+1, "hazard"), "DFR": (-1, "hazard"),
          "IFRA": (+1, "average"), "DFRA": (-1, "average")}


def aging_class(d: MarginalDistribution, cls: str, grid) -> GridReport:
    """Grid certificate of an aging class.

    IFR/DFR: the hazard is nondecreasing/nonincreasing between consecutive
    grid points. IFRA/DFRA: the same for ``-log(survival(x))/x``. Ties within
    a relative 1e-12 count as monotone. Points where the survival vanishes
    are skipped and listed in ``details``.
    """
    try:
        sign, kind = _AGING[cls.upper()]
    except KeyError:
        raise ArgumentError(f"unknown aging class {cls!r}") from None
    g = np.asarray(grid, dtype=float).ravel()
    if g.size == 0:
        raise ArgumentError("aging_class needs a nonempty grid")
    if np.any(np.diff(g) <= 0):
        raise ArgumentError("grid must be strictly increasing")
    s = as_float_array(d.survival(g))
    keep = s > 0
    if kind == "average":
        keep &= g > 0
    skipped = g[~keep].tolist()
    g = g[keep]
    if kind == "hazard":
        v = as_float_array(d.hazard(g))
    else:
        v = -np.log(s[keep]) / g
    if g.size < 2:
        return GridReport("pass", float("inf"), (), 0, TIE_TOL, cls.upper(),
                          {"skipped": skipped})
    scale = np.maximum(1e-300, np.maximum(np.abs(v[:-1]), np.abs(v[1:])))
    margins = sign * np.diff(v) / scale
    witnesses = list(zip(g[:-1].tolist(), g[1:].tolist()))
    return GridReport.from_margins(margins, witnesses, TIE_TOL, cls.upper(),
                                   {"skipped": skipped})
