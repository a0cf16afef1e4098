import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from blm import (
    ArgumentError,
    DomainError,
    LomaxMarginal,
    MomentRequest,
    OracleError,
    TransformPoint,
    block_basu,
    exy,
    exy_bounds,
    freund,
    lst,
    make_blm,
    marshall_olkin,
    mgf,
    mttf,
    pearson_correlation,
    product_moment,
    quadrature_oracle,
)
from blm.families import block_basu_density

rate = st.floats(0.2, 4.0)
LAWS = {
    "mo": marshall_olkin(1, 2, 3),
    "bb": block_basu(1.0, 0.5, 2.0),
    "freund": freund(1.5, 0.7, 2.5, 0.4),
    "lomax": make_blm(LomaxMarginal(5, 4), LomaxMarginal(5, 4), 1.5),
}


class TestLaplace:
    @pytest.mark.parametrize("name", list(LAWS))
    def test_matches_oracle(self, name):
        d = LAWS[name]
        pts = [(0.3, 0.7), (2.0, 0.1), (1.0, 1.0)]
        ref = quadrature_oracle(d, "lemma1_lst", pts)
        got = [lst(d, s, t) for s, t in pts]
        np.testing.assert_allclose(got, ref, rtol=1e-8)

    def test_bb_against_density_integral(self):
        l1, l2, l12 = 1.0, 0.5, 2.0
        d = block_basu(l1, l2, l12)
        s, t = 0.4, 1.1
        f = lambda x, y: math.exp(-s * x - t * y) * block_basu_density(l1, l2, l12, x, y)
        ref = (integrate.dblquad(f, 0, np.inf, lambda y: y, np.inf, epsabs=1e-12)[0]
               + integrate.dblquad(lambda x, y: f(y, x), 0, np.inf, lambda x: x, np.inf,
                                   epsabs=1e-12)[0])
        assert lst(d, s, t) == pytest.approx(ref, rel=1e-8)

    @given(rate, rate, rate, st.floats(0, 20), st.floats(0, 20))
    def test_is_a_probability_transform(self, l1, l2, l12, s, t):
        d = marshall_olkin(l1, l2, l12)
        v = lst(d, s, t)
        assert 0.0 < v <= 1.0 + 1e-15
        # monotone in each argument
        assert lst(d, s + 0.5, t) <= v + 1e-15
        assert lst(d, 0.0, 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_point_forms(self):
        d = LAWS["mo"]
        assert lst(d, TransformPoint(0.5, 0.2)) == lst(d, (0.5, 0.2)) == lst(d, 0.5, 0.2)

    def test_negative_argument(self):
        with pytest.raises(ArgumentError):
            lst(LAWS["mo"], -0.1, 0.0)


class TestMgf:
    @pytest.mark.parametrize("name", ["mo", "bb", "freund"])
    def test_matches_oracle(self, name):
        d = LAWS[name]
        # inside every marginal mgf domain (the Freund Y tail has rate 0.4)
        s, t = 0.3, 0.2
        ref = quadrature_oracle(d, "lemma2_mgf", (s, t))
        assert mgf(d, s, t) == pytest.approx(ref, rel=1e-8)

    def test_domain(self):
        d = LAWS["mo"]
        with pytest.raises(DomainError, match="s \\+ t < theta"):
            mgf(d, 3.0, 3.0)
        with pytest.raises(DomainError):
            quadrature_oracle(d, "lemma2_mgf", (3.0, 3.0))

    def test_heavy_tailed_marginal(self):
        with pytest.raises(DomainError, match="marginal X"):
            mgf(LAWS["lomax"], 0.1, 0.0)

    def test_oracle_flags_divergent_marginal(self):
        d = LAWS["freund"]
        with pytest.raises(DomainError):
            mgf(d, 0.2, 0.6)
        with pytest.raises(OracleError):
            quadrature_oracle(d, "lemma2_mgf", (0.2, 0.6))

    def test_mgf_and_lst_agree_at_negative_arguments(self):
        d = LAWS["freund"]
        assert mgf(d, -0.4, -1.2) == pytest.approx(lst(d, 0.4, 1.2), rel=1e-13)


class TestProductMoments:
    @pytest.mark.parametrize("name", list(LAWS))
    @pytest.mark.parametrize("i,j", [(1, 1), (2, 1), (1, 3), (2, 2)])
    def test_matches_oracle(self, name, i, j):
        d = LAWS[name]
        ref = quadrature_oracle(d, "lemma3_moment", (i, j))
        assert product_moment(d, i, j) == pytest.approx(ref, rel=1e-8)

    def test_exy_closed_form(self):
        d = LAWS["mo"]
        assert exy(d) == pytest.approx((1 / 4 + 1 / 5) / 6, rel=1e-15)
        assert product_moment(d, MomentRequest(1, 1)) == pytest.approx(exy(d), rel=1e-14)

    @given(rate, rate, rate)
    def test_exy_within_bounds(self, l1, l2, l12):
        for d in (marshall_olkin(l1, l2, l12), block_basu(l1, l2, l12)):
            lo, hi = exy_bounds(d)
            assert lo <= exy(d) * (1 + 1e-12) and exy(d) <= hi * (1 + 1e-12)

    def test_infinite_moment(self):
        with pytest.raises(DomainError):
            product_moment(make_blm(LomaxMarginal(2, 1), LomaxMarginal(2, 1), 3.0), 2, 1)

    @pytest.mark.parametrize("bad", [(0, 1), (1.5, 1), (1, -2)])
    def test_request_validation(self, bad):
        with pytest.raises(ArgumentError):
            MomentRequest(*bad)

    def test_mo_correlation(self):
        # MO correlation is l12 / (l1 + l2 + l12)
        assert pearson_correlation(LAWS["mo"]) == pytest.approx(0.5, rel=1e-13)

    @settings(max_examples=20)
    @given(rate, rate, rate)
    def test_correlation_in_range(self, l1, l2, l12):
        r = pearson_correlation(block_basu(l1, l2, l12))
        assert -1.0 <= r <= 1.0


class TestMttf:
    def test_series_and_parallel(self):
        d = LAWS["mo"]
        assert mttf(d, "series") == pytest.approx(1 / 6)
        assert mttf(d, "parallel") == pytest.approx(1 / 4 + 1 / 5 - 1 / 6, rel=1e-15)

    def test_parallel_against_quadrature(self):
        d = LAWS["freund"]
        # E[max] = int (1 - P(X <= t, Y <= t)) dt
        f = lambda t: 1 - float(d.cdf(t, t))
        assert mttf(d, "parallel") == pytest.approx(integrate.quad(f, 0, np.inf)[0], rel=1e-9)

    def test_unknown_system(self):
        with pytest.raises(ArgumentError):
            mttf(LAWS["mo"], "bridge")


class TestOracle:
    def test_unknown_kind(self):
        with pytest.raises(ArgumentError):
            quadrature_oracle(LAWS["mo"], "unknown_kind", (1, 1))

    def test_bad_shape(self):
        with pytest.raises(ArgumentError):
            quadrature_oracle(LAWS["mo"], "lemma1_lst", (1, 2, 3))

    def test_reports_non_convergence(self):
        # E[X^2 Y] is infinite for a Lomax(2) marginal
        d = make_blm(LomaxMarginal(2, 1), LomaxMarginal(2, 1), 3.0)
        with pytest.raises(OracleError):
            quadrature_oracle(d, "lemma3_moment", (2, 1), max_subdivisions=300)

    def test_real_orders(self):
        d = LAWS["mo"]
        v = quadrature_oracle(d, "lemma3_moment", (2.5, 1.0))
        # Cauchy-Schwarz on (X^(3/2) Y^(1/2)) (X Y^(1/2))
        assert 0 < v <= math.sqrt(product_moment(d, 3, 1) * product_moment(d, 2, 1))
