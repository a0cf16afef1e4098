"""Named BLM families and the generalized shock model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numeric import as_float_array, scalar_or_array
from .core import BlmDistribution, make_blm
from .errors import ArgumentError, DomainError
from .univariate import (
    ExponentialMarginal,
    MarginalDistribution,
    MinimumMarginal,
    SignedErlangMixture,
    SignedExponentialMixture,
)


def _positive(**rates):
    for k, v in rates.items():
        if not (isinstance(v, (int, float, np.floating, np.integer)) and v > 0
                and math.isfinite(v)):
            raise ArgumentError(f"{k} must be a positive finite rate, got {v!r}")
    return tuple(float(v) for v in rates.values())


@dataclass(frozen=True)
class MoParams:
    lambda1: float
    lambda2: float
    lambda12: float

    def __post_init__(self):
        _positive(lambda1=self.lambda1, lambda2=self.lambda2, lambda12=self.lambda12)

    @property
    def total(self) -> float:
        return self.lambda1 + self.lambda2 + self.lambda12


@dataclass(frozen=True)
class FreundParams:
    alpha: float
    beta: float
    alpha_prime: float
    beta_prime: float

    def __post_init__(self):
        _positive(alpha=self.alpha, beta=self.beta, alpha_prime=self.alpha_prime,
                  beta_prime=self.beta_prime)

    def as_tuple(self):
        return (self.alpha, self.beta, self.alpha_prime, self.beta_prime)


def _as_mo(p, l2, l12):
    if isinstance(p, MoParams):
        return p
    return MoParams(p, l2, l12)


def marshall_olkin(p, lambda2=None, lambda12=None, *, strict: bool = True) -> BlmDistribution:
    """Shock-model law with survival ``exp(-l1 x - l2 y - l12 max(x, y))``.

    Accepts a :class:`MoParams` or the three rates.
    """
    p = _as_mo(p, lambda2, lambda12)
    F = ExponentialMarginal(p.lambda1 + p.lambda12)
    G = ExponentialMarginal(p.lambda2 + p.lambda12)
    spec = {"family": "mo", "parameters": {"lambda1": p.lambda1, "lambda2": p.lambda2,
                                           "lambda12": p.lambda12}}
    d = make_blm(F, G, p.total, strict=strict, spec=spec, name="mo")
    d.params = p
    return d


def mo_survival(l1, l2, l12, x, y):
    """Direct shock-model survival, independent of the generic BLM evaluation."""
    x, y = as_float_array(x), as_float_array(y)
    return scalar_or_array(np.exp(-l1 * x - l2 * y - l12 * np.maximum(x, y)), x, y)


def _bb_marginal(own, other, l12):
    lam = own + other + l12
    s = own + other
    return SignedExponentialMixture([(lam / s, own + l12), (-l12 / s, lam)])


def block_basu(lambda1, lambda2, lambda12, *, strict: bool = True) -> BlmDistribution:
    """Absolutely continuous part of the shock-model law (no diagonal mass)."""
    l1, l2, l12 = _positive(lambda1=lambda1, lambda2=lambda2, lambda12=lambda12)
    F = _bb_marginal(l1, l2, l12)
    G = _bb_marginal(l2, l1, l12)
    spec = {"family": "block_basu",
            "parameters": {"lambda1": l1, "lambda2": l2, "lambda12": l12}}
    d = make_blm(F, G, l1 + l2 + l12, strict=strict, spec=spec, name="block_basu")
    d.params = MoParams(l1, l2, l12)
    return d


def block_basu_density(l1, l2, l12, x, y):
    """Closed-form joint density of the absolutely continuous shock-model part."""
    x, y = as_float_array(x), as_float_array(y)
    lam = l1 + l2 + l12
    s = l1 + l2
    right = l2 * lam * (l1 + l12) / s * np.exp(-(l1 + l12) * x - l2 * y)
    left = l1 * lam * (l2 + l12) / s * np.exp(-l1 * x - (l2 + l12) * y)
    return scalar_or_array(np.where(x >= y, right, left), x, y)


def block_basu_survival(l1, l2, l12, x, y):
    """Closed-form survival of the absolutely continuous shock-model part."""
    x, y = as_float_array(x), as_float_array(y)
    lam = l1 + l2 + l12
    s = l1 + l2
    m = np.maximum(x, y)
    out = lam / s * np.exp(-l1 * x - l2 * y - l12 * m) - l12 / s * np.exp(-lam * m)
    return scalar_or_array(out, x, y)


def freund_marginal(own_pre, other_pre, own_post) -> MarginalDistribution:
    """Marginal survival of one Freund component.

    ``(b exp(-a' x) + (a - a') exp(-theta x)) / (theta - a')`` with
    ``theta = a + b``; when ``theta == a'`` the limit
    ``(1 + b x) exp(-theta x)`` is an Erlang mixture.
    """
    a, b, ap = own_pre, other_pre, own_post
    theta = a + b
    gap = theta - ap
    if abs(gap) <= 1e-12 * theta:
        return SignedErlangMixture([(1.0 - b / theta, theta, 1), (b / theta, theta, 2)])
    return SignedExponentialMixture([(b / gap, ap), ((a - ap) / gap, theta)])


def freund(p, beta=None, alpha_prime=None, beta_prime=None, *,
           strict: bool = True) -> BlmDistribution:
    """Freund's load-sharing law; ``theta = alpha + beta``.

    Every positive parameter set gives a valid BLM law. When
    ``alpha + beta`` equals ``alpha'`` (or ``beta'``) the marginal carries an
    Erlang(2) term.
    """
    if not isinstance(p, FreundParams):
        p = FreundParams(p, beta, alpha_prime, beta_prime)
    a, b, ap, bp = p.as_tuple()
    F = freund_marginal(a, b, ap)
    G = freund_marginal(b, a, bp)
    spec = {"family": "freund", "parameters": {"alpha": a, "beta": b, "alpha_prime": ap,
                                               "beta_prime": bp}}
    d = make_blm(F, G, a + b, strict=strict, spec=spec, name="freund")
    d.params = p
    return d


def freund_density(alpha, beta, alpha_prime, beta_prime, x, y):
    """Closed-form Freund joint density."""
    x, y = as_float_array(x), as_float_array(y)
    a, b, ap, bp = alpha, beta, alpha_prime, beta_prime
    with np.errstate(over="ignore"):  # the unused branch may overflow
        right = ap * b * np.exp(-(a + b - ap) * y - ap * x)
        left = a * bp * np.exp(-(a + b - bp) * x - bp * y)
    return scalar_or_array(np.where(x >= y, right, left), x, y)


def freund_to_block_basu(lambda1, lambda2, lambda12) -> FreundParams:
    """Freund parameters whose law coincides with ``block_basu(l1, l2, l12)``."""
    l1, l2, l12 = _positive(lambda1=lambda1, lambda2=lambda2, lambda12=lambda12)
    lam = l1 + l2 + l12
    return FreundParams(l1 * lam / (l1 + l2), l2 * lam / (l1 + l2), l1 + l12, l2 + l12)


class GmoDistribution:
    """Shock model with arbitrary arrival laws.

    ``(X, Y) = (min(X1, X3), min(X2, X3))`` for independent ``Xi ~ Fi``, so
    ``H(x, y) = exp(-R1(x) - R2(y) - R3(max(x, y)))`` with ``Ri`` the
    cumulative hazards. It is a BLM law only when all three laws are
    exponential.
    """

    def __init__(self, F1: MarginalDistribution, F2: MarginalDistribution,
                 F3: MarginalDistribution):
        for k, d in (("F1", F1), ("F2", F2), ("F3", F3)):
            if not isinstance(d, MarginalDistribution):
                raise ArgumentError(f"{k} must be a marginal distribution")
        self.F1, self.F2, self.F3 = F1, F2, F3
        self.F = MinimumMarginal(F1, F3)
        self.G = MinimumMarginal(F2, F3)
        self.spec = None
        try:
            self.spec = {"family": "gmo", "marginals": {
                "F1": F1.to_spec(), "F2": F2.to_spec(), "F3": F3.to_spec()}}
        except ArgumentError:
            pass

    def __repr__(self):
        return f"GmoDistribution({self.F1!r}, {self.F2!r}, {self.F3!r})"

    @property
    def is_blm(self) -> bool:
        """Lack of memory at equal pairs needs all three arrival laws exponential."""
        return all(isinstance(d, ExponentialMarginal) for d in (self.F1, self.F2, self.F3))

    def cumulative_hazards(self, x):
        return tuple(d.cumulative_hazard(x) for d in (self.F1, self.F2, self.F3))

    def survival(self, x, y):
        xa, ya = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        if np.any(xa < 0) or np.any(ya < 0):
            raise ArgumentError("survival needs x, y >= 0")
        out = (as_float_array(self.F1.survival(xa)) * as_float_array(self.F2.survival(ya))
               * as_float_array(self.F3.survival(np.maximum(xa, ya))))
        return scalar_or_array(out, x, y)

    def _sf1(self, x, y):
        return self.F1._sf1(x) * self.F2._sf1(y) * self.F3._sf1(max(x, y))

    def density(self, x, y):
        """Joint density off the diagonal."""
        xa, ya = np.broadcast_arrays(as_float_array(x), as_float_array(y))
        if np.any(xa == ya):
            raise DomainError("density is undefined on the diagonal x == y")
        right = xa > ya
        hi = np.where(right, xa, ya)
        lo = np.where(right, ya, xa)
        right_val = as_float_array(self.F.density(hi)) * as_float_array(self.F2.density(lo))
        left_val = as_float_array(self.F1.density(lo)) * as_float_array(self.G.density(hi))
        return scalar_or_array(np.where(right, right_val, left_val), x, y)

    def to_blm(self, *, strict: bool = True) -> BlmDistribution:
        if not self.is_blm:
            raise ArgumentError("only exponential arrival laws give a BLM law")
        return marshall_olkin(self.F1.rate, self.F2.rate, self.F3.rate, strict=strict)


def generalized_marshall_olkin(F1, F2, F3) -> GmoDistribution:
    return GmoDistribution(F1, F2, F3)
