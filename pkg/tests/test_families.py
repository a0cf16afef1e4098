import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from blm import (
    ArgumentError,
    ExponentialMarginal,
    FreundParams,
    LomaxMarginal,
    MoParams,
    SignedErlangMixture,
    block_basu,
    freund,
    freund_to_block_basu,
    generalized_marshall_olkin,
    marshall_olkin,
)
from blm.families import block_basu_survival, freund_density, mo_survival

rate = st.floats(0.2, 4.0)
coord = st.floats(0.0, 5.0)
PTS = [(0.1, 0.4), (0.4, 0.1), (1.0, 1.0), (2.0, 0.3), (0.05, 3.0)]


class TestMarshallOlkin:
    def test_params(self):
        p = MoParams(1.0, 2.0, 3.0)
        assert p.total == 6.0
        d = marshall_olkin(p)
        assert d.theta == 6.0 and d.params == p
        assert d.spec == {"family": "mo", "parameters": {"lambda1": 1.0, "lambda2": 2.0,
                                                         "lambda12": 3.0}}

    @pytest.mark.parametrize("bad", [(0, 1, 1), (1, -1, 1), (1, 1, math.nan)])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ArgumentError):
            marshall_olkin(*bad)

    def test_marginals_exponential(self):
        d = marshall_olkin(1, 2, 3)
        x = np.array([0.0, 0.5, 2.0])
        np.testing.assert_allclose(d.F.survival(x), np.exp(-4 * x), rtol=1e-15)
        np.testing.assert_allclose(d.G.survival(x), np.exp(-5 * x), rtol=1e-15)

    def test_shock_formula_scalar(self):
        assert mo_survival(1, 2, 3, 1.0, 2.0) == pytest.approx(math.exp(-1 - 4 - 6))


class TestBlockBasu:
    def test_theta_and_no_atom(self):
        d = block_basu(1.0, 2.0, 0.5)
        assert d.theta == pytest.approx(3.5)
        assert d.atom_mass() == pytest.approx(0.0, abs=1e-15)

    def test_closed_form_survival_has_unit_mass(self):
        assert block_basu_survival(1, 2, 3, 0.0, 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_density_integrates_to_one(self):
        d = block_basu(1.0, 0.5, 2.0)
        tot = integrate.dblquad(lambda x, y: float(d.density(x, y)), 0, np.inf,
                                lambda y: y, np.inf, epsabs=1e-12)[0]
        tot += integrate.dblquad(lambda y, x: float(d.density(x, y)), 0, np.inf,
                                 lambda x: x, np.inf, epsabs=1e-12)[0]
        assert tot == pytest.approx(1.0, abs=1e-8)


class TestFreund:
    def test_params_validation(self):
        with pytest.raises(ArgumentError):
            FreundParams(1, 1, 0, 1)

    def test_density_matches_closed_form(self):
        p = (1.5, 0.7, 2.5, 0.4)
        d = freund(*p)
        for x, y in PTS:
            if x != y:
                assert d.density(x, y) == pytest.approx(freund_density(*p, x, y), rel=1e-11)

    def test_critical_case_marginal_is_erlang_mixture(self):
        # alpha + beta == alpha': Fbar(x) = (1 + beta x) exp(-theta x)
        d = freund(1, 1, 2, 2)
        assert isinstance(d.F, SignedErlangMixture)
        x = np.array([0.0, 0.3, 1.0, 4.0])
        np.testing.assert_allclose(d.F.survival(x), (1 + x) * np.exp(-2 * x), rtol=1e-14)

    def test_critical_case_is_limit_of_regular(self):
        near = freund(1, 1, 2 + 1e-6, 2 + 1e-6)
        crit = freund(1, 1, 2, 2)
        for x, y in PTS:
            assert crit.survival(x, y) == pytest.approx(near.survival(x, y), rel=1e-5)

    @given(rate, rate, rate, coord, coord)
    def test_block_basu_is_freund(self, l1, l2, l12, x, y):
        p = freund_to_block_basu(l1, l2, l12)
        a = freund(p).survival(x, y)
        b = block_basu(l1, l2, l12).survival(x, y)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-14)

    @settings(max_examples=10)
    @given(rate, rate, rate, rate)
    def test_survival_matches_density_integral(self, a, b, ap, bp):
        d = freund(a, b, ap, bp)
        x, y = 0.4, 0.9
        # H(x, y) = P(X > x, Y > y), split at the diagonal
        right = integrate.dblquad(lambda u, v: freund_density(a, b, ap, bp, u, v),
                                  y, np.inf, lambda v: max(x, v), np.inf, epsabs=1e-12)[0]
        left = integrate.dblquad(lambda v, u: freund_density(a, b, ap, bp, u, v),
                                 x, np.inf, lambda u: max(y, u), np.inf, epsabs=1e-12)[0]
        assert d.survival(x, y) == pytest.approx(right + left, rel=1e-6, abs=1e-12)


class TestGeneralizedMarshallOlkin:
    def test_exponential_laws_give_mo(self):
        g = generalized_marshall_olkin(ExponentialMarginal(1), ExponentialMarginal(2),
                                       ExponentialMarginal(3))
        assert g.is_blm
        d = g.to_blm()
        for x, y in PTS:
            assert g.survival(x, y) == pytest.approx(d.survival(x, y), rel=1e-14)
        assert g.spec["family"] == "gmo"

    def test_non_exponential_is_not_blm(self):
        g = generalized_marshall_olkin(LomaxMarginal(2, 1), ExponentialMarginal(2),
                                       ExponentialMarginal(3))
        assert not g.is_blm
        with pytest.raises(ArgumentError):
            g.to_blm()
        # lack of memory at equal pairs fails
        assert g.survival(1.5, 1.5) != pytest.approx(g.survival(0.5, 0.5) * g.survival(1, 1))

    def test_survival_is_product_of_arrival_laws(self):
        F1, F2, F3 = LomaxMarginal(2, 1), ExponentialMarginal(2), LomaxMarginal(3, 2)
        g = generalized_marshall_olkin(F1, F2, F3)
        x, y = 0.7, 0.2
        assert g.survival(x, y) == pytest.approx(
            F1.survival(x) * F2.survival(y) * F3.survival(x), rel=1e-15)
        np.testing.assert_allclose(g.F.survival(np.array([0.5])),
                                   F1.survival(0.5) * F3.survival(0.5), rtol=1e-15)

    def test_density_against_survival_differences(self):
        g = generalized_marshall_olkin(LomaxMarginal(2, 1), ExponentialMarginal(2),
                                       ExponentialMarginal(1))
        x, y, h = 0.9, 0.3, 1e-4
        num = (g.survival(x + h, y + h) - g.survival(x + h, y - h)
               - g.survival(x - h, y + h) + g.survival(x - h, y - h)) / (4 * h * h)
        assert g.density(x, y) == pytest.approx(num, rel=1e-6)

    def test_rejects_non_marginal(self):
        with pytest.raises(ArgumentError):
            generalized_marshall_olkin(1.0, ExponentialMarginal(1), ExponentialMarginal(1))
