"""Bivariate lack-of-memory distributions built from two marginals and a rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numeric import (
    ANALYTIC_TOL,
    H_CHECK_TOL,
    as_float_array,
    derivative,
    scalar_or_array,
    validation_grid,
)
from .errors import ArgumentError, ConsistencyError, DomainError, ValidationError
from .reports import ValidationCheck, ValidationReport
from .univariate import HazardDefinedMarginal, MarginalDistribution

SIDES = ("X_minus_Y", "Y_minus_X")


def _min_check(name, clause, margins, grid, tol, message):
    margins = np.asarray(margins, dtype=float)
    bad = ~np.isfinite(margins)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        return ValidationCheck(name, clause, False, float(grid[k]), float("-inf"),
                               f"{message}: non-finite value")
    k = int(np.argmin(margins))
    worst = float(margins[k])
    ok = worst >= -tol
    return ValidationCheck(name, clause, ok, float(grid[k]), worst,
                           "" if ok else f"{message} (worst {worst:.3e} at x={grid[k]:.6g})")


def validate_blm(F: MarginalDistribution, G: MarginalDistribution, theta: float) -> ValidationReport:
    """Run the construction checks for the triple ``(F, G, theta)``.

    Clauses: ``vi`` rate bounds ``max(f(0), g(0)) <= theta <= f(0)+g(0)``;
    ``vii`` nonnegative generators ``theta f + f'`` and ``theta g + g'``;
    ``iii`` ``exp(theta x) f(x)`` nondecreasing (and the same for g);
    ``iv`` ``F(x) + G(x) >= 1 - exp(-theta x)``.
    """
    grid = validation_grid(theta)
    f0, g0 = float(F.density(0.0)), float(G.density(0.0))
    lower = theta - max(f0, g0)
    upper = f0 + g0 - theta
    margin = min(lower, upper) / theta
    which = "exceeds f(0)+g(0)" if upper < lower else "is below max(f(0), g(0))"
    checks = [ValidationCheck(
        "theta_bounds", "vi", margin >= -ANALYTIC_TOL, 0.0, margin,
        "" if margin >= -ANALYTIC_TOL else
        f"theta={theta:g} {which} (f(0)={f0:g}, g(0)={g0:g})")]

    for nm, d in (("h1", F), ("h2", G)):
        h = theta * as_float_array(d.density(grid)) + as_float_array(d.density_derivative(grid))
        checks.append(_min_check(f"{nm}_nonnegative", "vii", h, grid, H_CHECK_TOL,
                                 f"theta*{'f' if nm == 'h1' else 'g'} + derivative is negative"))

    for nm, d in (("f", F), ("g", G)):
        with np.errstate(over="ignore", invalid="ignore"):
            v = np.exp(theta * grid) * as_float_array(d.density(grid))
        scale = np.maximum(np.abs(v[:-1]), np.abs(v[1:]))
        with np.errstate(invalid="ignore", divide="ignore"):
            steps = np.where(scale > 0, np.diff(v) / scale, 0.0)
        checks.append(_min_check(f"scaled_{nm}_monotone", "iii", steps, grid[:-1], H_CHECK_TOL,
                                 f"exp(theta x) {nm}(x) decreases"))

    bound = 1.0 + np.exp(-theta * grid) - as_float_array(F.survival(grid)) \
        - as_float_array(G.survival(grid))
    checks.append(_min_check("marginal_sum_bound", "iv", bound, grid, ANALYTIC_TOL,
                             "marginal survivals exceed 1 + exp(-theta x)"))
    return ValidationReport(tuple(checks))


def _raise_if_failed(report: ValidationReport, what: str):
    if report.passed:
        return
    parts = [f"clause ({c.clause}) {c.name}: {c.message}" for c in report.failed()]
    raise ValidationError(f"{what} rejected; " + "; ".join(parts), report)


@dataclass(frozen=True)
class BlmDecomposition:
    """Split of a BLM law into an absolutely continuous and a diagonal part.

    ``ac_part`` is ``None`` when ``weight_ac`` vanishes (pure diagonal law).
    """

    weight_ac: float
    weight_s: float
    ac_part: Callable | None
    singular_part: Callable
    ac_defined: bool


class BlmDistribution:
    """Bivariate law with survival

    ``H(x, y) = exp(-theta y) Fbar(x - y)`` for ``x >= y`` and
    ``exp(-theta x) Gbar(y - x)`` otherwise.

    Build with :func:`make_blm` (validated) rather than directly.
    """

    def __init__(self, F: MarginalDistribution, G: MarginalDistribution, theta: float,
                 validity: ValidationReport, spec: dict | None = None, name: str = "blm"):
        self.F = F
        self.G = G
        self.theta = float(theta)
        self.validity = validity
        self.spec = spec
        self.name = name
        self.f0 = float(F.density(0.0))
        self.g0 = float(G.density(0.0))

    def __repr__(self):
        return f"BlmDistribution({self.name}, F={self.F!r}, G={self.G!r}, theta={self.theta:g})"

    @property
    def valid(self) -> bool:
        return self.validity.passed

    # -- evaluation ---------------------------------------------------------
    def survival(self, x, y):
        xa, ya = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        if np.any(xa < 0) or np.any(ya < 0):
            raise ArgumentError("survival needs x, y >= 0")
        with np.errstate(invalid="ignore"):
            d = np.where(xa == ya, 0.0, xa - ya)
        right = d >= 0
        sf = as_float_array(self.F.survival(np.where(right, d, 0.0)))
        sg = as_float_array(self.G.survival(np.where(right, 0.0, -d)))
        out = np.where(right, np.exp(-self.theta * ya) * sf, np.exp(-self.theta * xa) * sg)
        return scalar_or_array(out, x, y)

    def _sf1(self, x: float, y: float) -> float:
        """Scalar survival without array overhead (used inside quadrature)."""
        if x >= y:
            return math.exp(-self.theta * y) * self.F._sf1(x - y)
        return math.exp(-self.theta * x) * self.G._sf1(y - x)

    def cdf(self, x, y):
        h = as_float_array(self.survival(x, y))
        out = 1.0 - as_float_array(self.F.survival(x)) - as_float_array(self.G.survival(y)) + h
        return scalar_or_array(out, x, y)

    def h1(self, u):
        """``theta f(u) + f'(u)``."""
        return scalar_or_array(self.theta * as_float_array(self.F.density(u))
                               + as_float_array(self.F.density_derivative(u)), u)

    def h2(self, u):
        """``theta g(u) + g'(u)``."""
        return scalar_or_array(self.theta * as_float_array(self.G.density(u))
                               + as_float_array(self.G.density_derivative(u)), u)

    def density(self, x, y):
        """Joint density off the diagonal; the diagonal carries :meth:`atom_mass`."""
        xa, ya = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        if np.any(xa < 0) or np.any(ya < 0):
            raise ArgumentError("density needs x, y >= 0")
        if np.any(xa == ya):
            raise DomainError("density is undefined on the diagonal x == y; "
                              "the diagonal mass is given by atom_mass()")
        d = xa - ya
        right = d > 0
        h1 = as_float_array(self.h1(np.where(right, d, 1.0)))
        h2 = as_float_array(self.h2(np.where(right, 1.0, -d)))
        out = np.where(right, np.exp(-self.theta * ya) * h1, np.exp(-self.theta * xa) * h2)
        return scalar_or_array(out, x, y)

    def atom_mass(self) -> float:
        """P(X = Y) = (f(0) + g(0))/theta - 1."""
        a = (self.f0 + self.g0) / self.theta - 1.0
        if a < -ANALYTIC_TOL or a > 1 + ANALYTIC_TOL:
            raise ConsistencyError(f"diagonal mass {a} outside [0, 1]; invalid parameters")
        return min(1.0, max(0.0, a))

    @property
    def atom(self) -> float:
        return self.atom_mass()

    def diff_tail(self, t, side: str = "X_minus_Y"):
        """P(X - Y > t) (or P(Y - X > t)) for ``t >= 0``."""
        if side not in SIDES:
            raise ArgumentError(f"side must be one of {SIDES}")
        ta = as_float_array(t)
        if np.any(ta < 0):
            raise ArgumentError("diff_tail needs t >= 0")
        d = self.F if side == "X_minus_Y" else self.G
        out = as_float_array(d.survival(ta)) - as_float_array(d.density(ta)) / self.theta
        if np.any(out < -ANALYTIC_TOL):
            raise ConsistencyError(f"P({side} > t) is negative ({out.min():.3e}); "
                                   "the distribution is not valid")
        return scalar_or_array(np.clip(out, 0.0, 1.0), t)

    def decompose(self) -> BlmDecomposition:
        ws = self.atom_mass()
        wa = 2.0 - (self.f0 + self.g0) / self.theta
        wa = min(1.0, max(0.0, wa))
        theta = self.theta

        def singular(x, y):
            return scalar_or_array(np.exp(-theta * np.maximum(as_float_array(x),
                                                              as_float_array(y))), x, y)

        if wa <= ANALYTIC_TOL:
            return BlmDecomposition(wa, ws, None, singular, False)

        def ac(x, y):
            h = as_float_array(self.survival(x, y))
            return scalar_or_array((h - ws * as_float_array(singular(x, y))) / wa, x, y)

        return BlmDecomposition(wa, ws, ac, singular, True)

    def marginal(self, which: str) -> MarginalDistribution:
        return {"X": self.F, "Y": self.G}[which]


def make_blm(F: MarginalDistribution, G: MarginalDistribution, theta: float, *,
             strict: bool = True, spec: dict | None = None, name: str = "custom") -> BlmDistribution:
    """Validate ``(F, G, theta)`` and build the BLM law.

    With ``strict=True`` a failed check raises :class:`ValidationError` naming
    the clause; with ``strict=False`` the object is returned carrying the
    failing report.
    """
    if not (isinstance(theta, (int, float, np.floating)) and theta > 0 and math.isfinite(theta)):
        raise ArgumentError(f"theta must be a positive finite rate, got {theta!r}")
    report = validate_blm(F, G, float(theta))
    if strict:
        _raise_if_failed(report, "BLM construction")
    if spec is None:
        try:
            spec = {"family": "custom", "theta": float(theta),
                    "marginals": {"F": F.to_spec(), "G": G.to_spec()}}
        except ArgumentError:
            spec = None
    return BlmDistribution(F, G, float(theta), report, spec=spec, name=name)


def _far_horizon(theta):
    return 1e6 / theta


def hazard_checks(r1: MarginalDistribution, r2: MarginalDistribution, theta: float):
    """Conditions (a)-(e) for building a BLM law from two hazard rates.

    (a) hazards evaluable, finite and nonnegative on the grid; (b)
    ``0 <= r <= theta``; (c) divergent integrated hazard, accepted when the
    survival at ``1e6/theta`` is below 1e-6 or ``x r(x) >= 0.5`` there (hazards
    decaying no faster than ``c/x`` still integrate to infinity); (d)
    ``r (theta - r) + r' >= 0``; (e) ``r1(0) + r2(0) >= theta``.
    """
    grid = validation_grid(theta)
    checks = []
    rates = {}
    for nm, d in (("r1", r1), ("r2", r2)):
        try:
            r = as_float_array(d.hazard(grid))
            ok = bool(np.all(np.isfinite(r)) and np.all(r >= 0))
        except Exception as exc:  # user callables may fail arbitrarily
            r, ok = None, False
            msg = f"{nm} could not be evaluated: {exc}"
        else:
            msg = "" if ok else f"{nm} is negative or non-finite on the grid"
        checks.append(ValidationCheck(f"{nm}_evaluable", "a", ok, None, 0.0 if ok else -1.0, msg))
        rates[nm] = r
    if any(r is None for r in rates.values()):
        return checks
    for nm, d in (("r1", r1), ("r2", r2)):
        r = rates[nm]
        checks.append(_min_check(f"{nm}_bounded_by_theta", "b", np.minimum(r, theta - r), grid,
                                 ANALYTIC_TOL, f"{nm} leaves [0, theta]"))
    for nm, d in (("r1", r1), ("r2", r2)):
        T = _far_horizon(theta)
        s_far = float(d.survival(T))
        tail = float(d.hazard(T)) * T
        ok = s_far <= 1e-6 or tail >= 0.5
        checks.append(ValidationCheck(
            f"{nm}_integral_diverges", "c", ok, T, max(1e-6 - s_far, tail - 0.5),
            "" if ok else f"integrated {nm} appears finite (survival {s_far:.3e} at x={T:g})"))
    for nm, d in (("r1", r1), ("r2", r2)):
        r = rates[nm]
        if isinstance(d, HazardDefinedMarginal):
            dr = as_float_array(d.hazard_derivative(grid))
        else:
            dr = derivative(lambda u: as_float_array(d.hazard(u)), grid)
        checks.append(_min_check(f"{nm}_generator_nonnegative", "d", r * (theta - r) + dr, grid,
                                 H_CHECK_TOL, f"{nm}(theta - {nm}) + {nm}' is negative"))
    s0 = float(rates["r1"][0] + rates["r2"][0])
    margin = (s0 - theta) / theta
    checks.append(ValidationCheck(
        "initial_rates_cover_theta", "e", margin >= -ANALYTIC_TOL, 0.0, margin,
        "" if margin >= -ANALYTIC_TOL else f"r1(0)+r2(0)={s0:g} < theta={theta:g}"))
    return checks


def from_hazards(r1, r2, theta: float, *, strict: bool = True, breakpoints=()) -> BlmDistribution:
    """BLM law whose marginals have hazard rates ``r1`` and ``r2``.

    ``r1``/``r2`` are callables or :class:`MarginalDistribution` instances.
    """
    if not (theta > 0 and math.isfinite(theta)):
        raise ArgumentError(f"theta must be a positive finite rate, got {theta!r}")
    margs = []
    for r in (r1, r2):
        if isinstance(r, MarginalDistribution):
            margs.append(r)
        elif callable(r):
            margs.append(HazardDefinedMarginal(r, breakpoints=breakpoints))
        else:
            raise ArgumentError("hazards must be callables or marginal distributions")
    F, G = margs
    kul = hazard_checks(F, G, float(theta))
    early = ValidationReport(tuple(kul))
    if strict:
        _raise_if_failed(early, "hazard construction")
    if any(c.clause == "a" and not c.passed for c in kul):
        base = ()
    else:
        base = validate_blm(F, G, float(theta)).checks
    report = ValidationReport(tuple(kul) + tuple(base))
    if strict:
        _raise_if_failed(report, "hazard construction")
    spec = None
    try:
        spec = {"family": "custom", "theta": float(theta),
                "marginals": {"F": F.to_spec(), "G": G.to_spec()}}
    except ArgumentError:
        pass
    return BlmDistribution(F, G, float(theta), report, spec=spec, name="hazard")
