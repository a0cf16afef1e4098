"""Transforms, product moments and reliability summaries of BLM laws.

Every closed form here has an independent counterpart in
:func:`quadrature_oracle`, which integrates the joint survival function
directly and never calls the closed-form marginal transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import BlmDistribution
from .errors import ArgumentError, DomainError, OracleError


@dataclass(frozen=True)
class TransformPoint:
    s: float
    t: float


@dataclass(frozen=True)
class MomentRequest:
    i: int
    j: int

    def __post_init__(self):
        for v in (self.i, self.j):
            if int(v) != v or v < 1:
                raise ArgumentError("moment powers must be positive integers")


def _point(p, t):
    if isinstance(p, TransformPoint):
        return float(p.s), float(p.t)
    if t is None:
        s, t = p
        return float(s), float(t)
    return float(p), float(t)


def lst(d: BlmDistribution, p, t=None) -> float:
    """Joint Laplace-Stieltjes transform ``E[exp(-sX - tY)]`` for ``s, t >= 0``."""
    s, t = _point(p, t)
    if s < 0 or t < 0:
        raise ArgumentError("Laplace transform needs s, t >= 0")
    th = d.theta
    lx, ly = d.F.lst(s), d.G.lst(t)
    return ((th + s) * lx + (th + t) * ly - th) / (th + s + t)


def _marginal_mgf(m, s, label):
    try:
        return m.mgf(s)
    except DomainError as exc:
        raise DomainError(f"marginal {label} has no finite mgf at {s:g}: {exc}") from None


def mgf(d: BlmDistribution, p, t=None) -> float:
    """Joint moment generating function ``E[exp(sX + tY)]`` for ``s + t < theta``."""
    s, t = _point(p, t)
    th = d.theta
    if s + t >= th:
        raise DomainError(f"mgf needs s + t < theta = {th:g}; got s + t = {s + t:g}")
    mx = _marginal_mgf(d.F, s, "X")
    my = _marginal_mgf(d.G, t, "Y")
    return ((th - s) * mx + (th - t) * my - th) / (th - s - t)


def _marginal_moment(m, k, label):
    try:
        return m.raw_moment(k)
    except DomainError as exc:
        raise DomainError(f"E[{label}^{k}] is infinite: {exc}") from None


def product_moment(d: BlmDistribution, i, j=None) -> float:
    """``E[X^i Y^j]`` for positive integers ``i`` and ``j``."""
    if isinstance(i, MomentRequest):
        i, j = i.i, i.j
    req = MomentRequest(i, j)
    i, j = int(req.i), int(req.j)
    th = d.theta
    terms = []
    for k in range(i):
        terms.append(math.comb(i - 1, k) / (i - k) * math.factorial(j + k - 1) / th ** (j + k)
                     * _marginal_moment(d.F, i - k, "X"))
    for k in range(j):
        terms.append(math.comb(j - 1, k) / (j - k) * math.factorial(i + k - 1) / th ** (i + k)
                     * _marginal_moment(d.G, j - k, "Y"))
    return i * j * math.fsum(terms)


def exy(d: BlmDistribution) -> float:
    """``E[XY] = (E[X] + E[Y]) / theta``."""
    return (_marginal_moment(d.F, 1, "X") + _marginal_moment(d.G, 1, "Y")) / d.theta


def exy_bounds(d: BlmDistribution) -> tuple[float, float]:
    """Range ``[1/theta^2, (E[X] + E[Y])^2]`` that ``E[XY]`` must lie in."""
    s = _marginal_moment(d.F, 1, "X") + _marginal_moment(d.G, 1, "Y")
    return 1.0 / d.theta**2, s * s


def pearson_correlation(d: BlmDistribution) -> float:
    ex, ey = _marginal_moment(d.F, 1, "X"), _marginal_moment(d.G, 1, "Y")
    vx = _marginal_moment(d.F, 2, "X") - ex * ex
    vy = _marginal_moment(d.G, 2, "Y") - ey * ey
    if vx <= 0 or vy <= 0:
        raise DomainError("a marginal has zero variance; correlation undefined")
    rho = (exy(d) - ex * ey) / math.sqrt(vx * vy)
    return min(1.0, max(-1.0, rho))


def mttf(d: BlmDistribution, system: str) -> float:
    """Mean time to failure of a two-component series or parallel system."""
    if system == "series":
        return 1.0 / d.theta
    if system == "parallel":
        return _marginal_moment(d.F, 1, "X") + _marginal_moment(d.G, 1, "Y") - 1.0 / d.theta
    raise ArgumentError("system must be 'series' or 'parallel'")


# ---------------------------------------------------------------------------
# quadrature oracles

ORACLE_KINDS = ("lemma1_lst", "lemma2_mgf", "lemma3_moment")


def _cubature(fn, ndim, rtol, fail_above, max_sub):
    res = integrate.cubature(fn, np.zeros(ndim), np.full(ndim, np.inf), rtol=rtol, atol=0.0,
                             max_subdivisions=max_sub)
    est = np.asarray(res.estimate, dtype=float)
    err = np.asarray(res.error, dtype=float)
    if res.status != "converged":
        raise OracleError(f"cubature did not converge (status {res.status})")
    if not np.all(np.isfinite(est)):
        raise OracleError("integral is not finite; the transform or moment diverges")
    rel = np.max(err / np.maximum(np.abs(est), 1e-300))
    if rel > fail_above:
        raise OracleError(f"oracle error estimate {rel:.2e} above {fail_above:.0e}")
    return est


def _joint_integral(d, weight, rtol, fail_above, max_sub):
    """``int int H(x, y) weight(x, y) dx dy`` over ``[0, inf)^2``.

    Integrated in wedge coordinates ``(y, z)`` with ``x = y + z`` (and the
    mirror image), so the kink of ``H`` along the diagonal lies on the
    boundary of the domain. ``weight`` maps point arrays to ``(n, k)``.
    """
    def fn(p):
        a, z = p[:, 0], p[:, 1]
        total = 0.0
        for x, y in ((a + z, a), (a, a + z)):
            h = np.asarray(d.survival(x, y), dtype=float)[:, None]
            with np.errstate(over="ignore", invalid="ignore"):
                total = total + np.where(h > 0, h * weight(x, y), 0.0)
        return total
    return _cubature(fn, 2, rtol, fail_above, max_sub)


def _marginal_transforms(d, us, sign, which, rtol, fail_above, max_sub):
    """``1 + sign*u int H(x, 0) exp(sign*u*x) dx`` for each ``u``."""
    us = np.asarray(us, dtype=float)

    def fn(p):
        x = p[:, 0]
        zero = np.zeros_like(x)
        h = np.asarray(d.survival(x, zero) if which == 0 else d.survival(zero, x), float)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.where(h[:, None] > 0, h[:, None] * np.exp(sign * us[None, :] * x[:, None]),
                            0.0)
    return 1.0 + sign * us * _cubature(fn, 1, rtol, fail_above, max_sub)


def quadrature_oracle(d, kind: str, args, *, rtol: float = 1e-10, fail_above: float = 1e-7,
                      max_subdivisions: int = 20000):
    """Evaluate transforms or moments by integrating the joint survival function.

    ``lemma1_lst``: ``st int int H exp(-sx-ty) - 1 + L_X(s) + L_Y(t)``;
    ``lemma2_mgf``: the same with ``exp(sx+ty)`` and marginal mgfs;
    ``lemma3_moment``: ``rs int int H x^(r-1) y^(s-1)`` for real ``r, s > 0``.

    ``args`` is one ``(s, t)`` pair (returns a float) or a sequence of pairs
    (returns an array; all points share one adaptive cubature). Marginal
    transforms come from 1-D cubature of ``H(x, 0)`` and ``H(0, y)``.
    Raises :class:`OracleError` when the cubature does not converge or its
    estimated relative error exceeds ``fail_above``; ``max_subdivisions``
    caps the adaptive refinement.
    """
    max_sub = int(max_subdivisions)
    if kind not in ORACLE_KINDS:
        raise ArgumentError(f"kind must be one of {ORACLE_KINDS}")
    pts = np.asarray(args, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != 2:
        raise ArgumentError("oracle arguments are (s, t) pairs")
    s, t = pts[:, 0], pts[:, 1]
    if kind == "lemma3_moment":
        if np.any(pts <= 0):
            raise ArgumentError("moment orders must be positive")
        weight = lambda x, y: x[:, None] ** (s - 1) * y[:, None] ** (t - 1)
        val = s * t * _joint_integral(d, weight, rtol, fail_above, max_sub)
    else:
        sign = -1.0 if kind == "lemma1_lst" else 1.0
        if kind == "lemma1_lst" and np.any(pts < 0):
            raise ArgumentError("Laplace transform needs s, t >= 0")
        if kind == "lemma2_mgf" and np.any(s + t >= d.theta):
            raise DomainError("mgf needs s + t < theta")
        mx = _marginal_transforms(d, s, sign, 0, rtol, fail_above, max_sub)
        my = _marginal_transforms(d, t, sign, 1, rtol, fail_above, max_sub)
        joint = _joint_integral(
            d, lambda x, y: np.exp(sign * (s[None, :] * x[:, None] + t[None, :] * y[:, None])),
            rtol, fail_above, max_sub)
        val = s * t * joint - 1.0 + mx + my
    return float(val[0]) if single else val
