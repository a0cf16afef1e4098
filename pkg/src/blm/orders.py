"""Univariate and bivariate stochastic-order comparisons on grids."""

from __future__ import annotations

import numpy as np

from ._numeric import ANALYTIC_TOL, TIE_TOL, as_float_array, classify, validation_grid
from .dependence import Grid
from .errors import ArgumentError, PreconditionError
from .moments import lst, pearson_correlation
from .reports import GridReport, OrderVerdict
from .univariate import ExponentialMarginal, MarginalDistribution, aging_class

UNIVARIATE_RELATIONS = ("st", "hr", "rh", "lr")
#: margins between ``-band`` and ``-tol`` give an inconclusive verdict
ORDER_BAND = 1e-9


def _verdict(relation, margins, witnesses, tol, band, details):
    margins = np.asarray(margins, dtype=float)
    if margins.size == 0:
        return OrderVerdict(relation, "inconclusive", float("nan"), (), details)
    k = int(np.argmin(margins))
    worst = float(margins[k])
    holds = {"pass": "yes", "fail": "no", "inconclusive": "inconclusive"}[
        classify(worst, tol, band)]
    return OrderVerdict(relation, holds, worst, tuple(witnesses[k]), details)


def _monotone_margins(values, xs):
    v = np.asarray(values, dtype=float)
    scale = np.maximum(np.maximum(np.abs(v[:-1]), np.abs(v[1:])), 1e-300)
    return np.diff(v) / scale, list(zip(xs[:-1].tolist(), xs[1:].tolist()))


def univariate_order(a: MarginalDistribution, b: MarginalDistribution, relation: str,
                     grid, tol: float = TIE_TOL, band: float = ORDER_BAND) -> OrderVerdict:
    """Is ``A <= B`` in the given order on the grid?

    ``st``: ``Bbar - Abar >= 0``; ``hr``: ``Bbar/Abar`` nondecreasing; ``rh``:
    ``B/A`` (cdfs) nondecreasing; ``lr``: ``b/a`` (densities) nondecreasing.
    Monotonicity uses relative steps, so ties within ``tol`` count as
    monotone. Points where the denominator vanishes are skipped and listed.
    """
    if relation not in UNIVARIATE_RELATIONS:
        raise ArgumentError(f"relation must be one of {UNIVARIATE_RELATIONS}")
    xs = np.asarray(grid.xs if isinstance(grid, Grid) else grid, dtype=float).ravel()
    if xs.size < 2 or np.any(np.diff(xs) <= 0):
        raise ArgumentError("grid must hold at least 2 strictly increasing points")
    if relation == "st":
        m = as_float_array(b.survival(xs)) - as_float_array(a.survival(xs))
        return _verdict("st", m, [(float(x),) for x in xs], tol, band, {})
    num_fn, den_fn = {"hr": (b.survival, a.survival), "rh": (b.cdf, a.cdf),
                      "lr": (b.density, a.density)}[relation]
    num, den = as_float_array(num_fn(xs)), as_float_array(den_fn(xs))
    keep = den > 0
    skipped = xs[~keep].tolist()
    if keep.sum() < 2:
        return OrderVerdict(relation, "inconclusive", float("nan"), (), {"skipped": skipped})
    m, wit = _monotone_margins(num[keep] / den[keep], xs[keep])
    return _verdict(relation, m, wit, tol, band, {"skipped": skipped})


def theorem5_marginal_dominance(d, grid=None) -> list[OrderVerdict]:
    """``Exp(theta) <= F`` and ``Exp(theta) <= G`` in likelihood ratio."""
    xs = validation_grid(d.theta)[1:] if grid is None else grid
    z = ExponentialMarginal(d.theta)
    return [univariate_order(z, d.F, "lr", xs), univariate_order(z, d.G, "lr", xs)]


def marginal_hazard_bound(d, grid=None) -> GridReport:
    """Both marginal hazard rates stay at or below ``theta``."""
    xs = validation_grid(d.theta) if grid is None else np.asarray(grid, dtype=float)
    margins, wit = [], []
    for nm, m in (("F", d.F), ("G", d.G)):
        s = as_float_array(m.survival(xs))
        keep = s > 0
        h = as_float_array(m.density(xs[keep])) / s[keep]
        margins.append((d.theta - h) / d.theta)
        wit += [(nm, float(x)) for x in xs[keep]]
    return GridReport.from_margins(np.concatenate(margins), wit, ANALYTIC_TOL, "hazard_bound")


def bivariate_ifra_check(d, alphas, g: Grid, kind: str = "IFRA",
                         tol: float = ANALYTIC_TOL, band: float = ORDER_BAND) -> OrderVerdict:
    """``H(a x, a y) >= H(x, y)^a`` (IFRA) or ``<=`` (DFRA) on the grid.

    Margins are relative to the larger side. When ``d`` exposes marginals
    ``F`` and ``G``, the matching univariate classes are checked on the
    same points and the agreement is reported in ``details``.
    """
    kind = kind.upper()
    if kind not in ("IFRA", "DFRA"):
        raise ArgumentError("kind must be IFRA or DFRA")
    al = np.asarray(alphas, dtype=float).ravel()
    if al.size == 0 or np.any((al <= 0) | (al >= 1)):
        raise ArgumentError("alphas must lie in (0, 1)")
    sign = 1.0 if kind == "IFRA" else -1.0
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    margins, wit = [], []
    H = as_float_array(d.survival(X, Y))
    for a in al:
        lhs = as_float_array(d.survival(a * X, a * Y))
        rhs = H**a
        scale = np.maximum(np.maximum(lhs, rhs), 1e-300)
        margins.append((sign * (lhs - rhs) / scale).ravel())
        wit += [(float(a), x, y) for x, y in zip(X.ravel().tolist(), Y.ravel().tolist())]
    details = {}
    if hasattr(d, "F") and hasattr(d, "G"):
        pts = np.unique(np.concatenate((g.xs, g.ys)))
        fr = aging_class(d.F, kind, pts)
        gr = aging_class(d.G, kind, pts)
        details = {"marginal_F": fr.verdict, "marginal_G": gr.verdict}
    v = _verdict(kind, np.concatenate(margins), wit, tol, band, details)
    if details and v.holds != "inconclusive":
        marg_ok = details["marginal_F"] == "pass" and details["marginal_G"] == "pass"
        details["iff_consistent"] = marg_ok == (v.holds == "yes")
    return v


def _margins_match(d1, d2, g: Grid, tol=1e-9):
    pts = np.unique(np.concatenate((g.xs, g.ys)))
    gap = max(np.max(np.abs(as_float_array(d1.F.survival(pts)) - as_float_array(d2.F.survival(pts)))),
              np.max(np.abs(as_float_array(d1.G.survival(pts)) - as_float_array(d2.G.survival(pts)))))
    return float(gap) <= tol, float(gap)


def lt_grid(theta: float, n: int = 8) -> np.ndarray:
    pts = np.geomspace(1e-3, 10.0 * theta, n)
    S, T = np.meshgrid(pts, pts, indexing="ij")
    return np.column_stack((S.ravel(), T.ravel()))


def compare_blm(d1, d2, relation: str, g: Grid, tol: float = ANALYTIC_TOL,
                band: float = ORDER_BAND) -> OrderVerdict:
    """Is ``(X1, Y1) <= (X2, Y2)`` in the upper orthant, concordance or Lt order?

    ``uo``: ``H1 <= H2`` on the grid. ``concordance``: equal margins (else
    :class:`PreconditionError`) plus ``uo``. ``Lt``: ``L1(s, t) >= L2(s, t)``
    on a log-spaced 8x8 grid of transform points in ``[1e-3, 10 theta]``.
    """
    if relation not in ("uo", "concordance", "Lt"):
        raise ArgumentError("relation must be uo, concordance or Lt")
    if relation == "Lt":
        pts = lt_grid(max(d1.theta, d2.theta))
        m = np.array([lst(d1, s, t) - lst(d2, s, t) for s, t in pts])
        return _verdict("Lt", m, [tuple(p) for p in pts.tolist()], tol, band, {})
    details = {}
    if relation == "concordance":
        ok, gap = _margins_match(d1, d2, g)
        if not ok:
            raise PreconditionError(f"concordance needs equal margins (gap {gap:.3e})")
        details["margin_gap"] = gap
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    m = as_float_array(d2.survival(X, Y)) - as_float_array(d1.survival(X, Y))
    wit = list(zip(X.ravel().tolist(), Y.ravel().tolist()))
    pts = np.unique(np.concatenate((g.xs, g.ys)))
    st_x = univariate_order(d1.F, d2.F, "st", pts, tol, band).holds
    st_y = univariate_order(d1.G, d2.G, "st", pts, tol, band).holds
    details.update({"X_st": st_x, "Y_st": st_y, "theta1_ge_theta2": d1.theta >= d2.theta})
    return _verdict(relation, m.ravel(), wit, tol, band, details)


def slepian_check(d1, d2, g: Grid, tol: float = ANALYTIC_TOL) -> OrderVerdict:
    """Same-margin laws: ``rho1 <= rho2`` iff ``H1 <= H2`` (and the mirror).

    ``holds`` is ``"yes"`` when both equivalences agree on the grid; the
    witness of a disagreement is the grid point with the worst margin.
    """
    ok, gap = _margins_match(d1, d2, g)
    if not ok:
        raise PreconditionError(f"Slepian comparison needs identical margins (gap {gap:.3e})")
    r1, r2 = pearson_correlation(d1), pearson_correlation(d2)
    X, Y = np.meshgrid(g.xs, g.ys, indexing="ij")
    diff = (as_float_array(d2.survival(X, Y)) - as_float_array(d1.survival(X, Y))).ravel()
    pts = list(zip(X.ravel().tolist(), Y.ravel().tolist()))
    rho_tol = 1e-12 * max(1.0, abs(r1), abs(r2))
    forward = ((r1 <= r2 + rho_tol), bool(np.min(diff) >= -tol))
    reverse = ((r2 <= r1 + rho_tol), bool(np.max(diff) <= tol))
    agree = forward[0] == forward[1] and reverse[0] == reverse[1]
    details = {"rho1": r1, "rho2": r2, "rho1_le_rho2": forward[0], "H1_le_H2": forward[1],
               "rho2_le_rho1": reverse[0], "H2_le_H1": reverse[1]}
    if agree:
        return OrderVerdict("slepian", "yes", float(np.min(np.abs(diff))), (), details)
    k = int(np.argmin(diff)) if forward[0] != forward[1] else int(np.argmax(diff))
    return OrderVerdict("slepian", "no", float(diff[k]), pts[k], details)
