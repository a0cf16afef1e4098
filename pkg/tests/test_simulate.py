import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blm import (
    ArgumentError,
    ExponentialMarginal,
    HazardDefinedMarginal,
    LomaxMarginal,
    MoParams,
    PreconditionError,
    RngStream,
    SampleBatch,
    block_basu,
    chi2_independence,
    estimate,
    freund,
    from_hazards,
    generalized_marshall_olkin,
    ks_statistic,
    ks_two_sample,
    make_blm,
    marshall_olkin,
    mttf,
    pearson_correlation,
    product_moment,
    sample_blm,
    sample_gmo,
    sample_mo,
)

N = 20000
LAWS = {
    "mo": marshall_olkin(1, 2, 3),
    "bb": block_basu(1.0, 0.5, 2.0),
    "freund": freund(1.5, 0.7, 2.5, 0.4),
    "freund_critical": freund(1, 1, 2, 2),
    "lomax": make_blm(LomaxMarginal(5, 4), LomaxMarginal(5, 4), 1.5),
    "hazard": from_hazards(lambda x: 2.0 - np.exp(-x), lambda x: 2.0 - np.exp(-x), 2.0),
    "hazard_table": from_hazards(
        HazardDefinedMarginal.from_table([[0.0, 1.0], [1.0, 1.5]]),
        HazardDefinedMarginal.from_table([[0.0, 1.0], [1.0, 1.5]]), 2.0),
}


def _points(d, k=5):
    q = np.array([0.1, 0.3, 0.5, 0.7, 0.9])[:k]
    xs = np.atleast_1d(d.F.quantile(q))
    ys = np.atleast_1d(d.G.quantile(q))
    return [(float(x), float(y)) for x in xs for y in ys]


class TestRng:
    def test_replay(self):
        a = RngStream(7, 2).generator.random(5)
        b = RngStream(7, 2).generator.random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(7, 0).generator.random(5)
        b = RngStream(7).substream(1).generator.random(5)
        assert not np.array_equal(a, b)

    @pytest.mark.parametrize("seed,stream", [(-1, 0), (1.5, 0), (2**64, 0), (1, -1)])
    def test_bad_ids(self, seed, stream):
        with pytest.raises(ArgumentError):
            RngStream(seed, stream)


class TestBatch:
    def test_read_only_and_pairs(self):
        b = sample_mo((1, 2, 3), 10, 1)
        assert b.n == 10 and b.pairs.shape == (10, 2)
        with pytest.raises(ValueError):
            b.x[0] = 1.0

    def test_validation(self):
        with pytest.raises(ArgumentError):
            SampleBatch(np.ones(3), np.ones(2), "x", 0, 0, {})
        with pytest.raises(ArgumentError):
            SampleBatch(-np.ones(3), np.ones(3), "x", 0, 0, {})

    def test_concatenate(self):
        a = sample_mo((1, 2, 3), 5, RngStream(1, 0))
        b = sample_mo((1, 2, 3), 7, RngStream(1, 1))
        c = SampleBatch.concatenate([a, b])
        assert c.n == 12
        np.testing.assert_array_equal(c.x[:5], a.x)
        with pytest.raises(ArgumentError):
            SampleBatch.concatenate([a, sample_blm(LAWS["mo"], 5, 1)])
        with pytest.raises(ArgumentError):
            SampleBatch.concatenate([])

    @pytest.mark.parametrize("n", [0, -3, 2.5])
    def test_bad_n(self, n):
        with pytest.raises(ArgumentError):
            sample_mo((1, 2, 3), n, 0)


class TestShockSamplers:
    def test_reproducible(self):
        a = sample_mo(MoParams(1, 2, 3), 100, RngStream(3, 1))
        b = sample_mo(MoParams(1, 2, 3), 100, RngStream(3, 1))
        np.testing.assert_array_equal(a.pairs, b.pairs)
        assert a.sampler_id == "mo_shock" and a.seed == 3 and a.stream == 1

    def test_mo_atom_fraction(self):
        b = sample_mo((1, 2, 3), N, 11)
        p, se = estimate(b, "atom_fraction")
        assert abs(p - 0.5) < 4.5 * se

    def test_gmo_exponential_matches_mo(self):
        g = generalized_marshall_olkin(ExponentialMarginal(1), ExponentialMarginal(2),
                                       ExponentialMarginal(3))
        a = sample_gmo(g, N, RngStream(5, 0))
        b = sample_mo((1, 2, 3), N, RngStream(5, 1))
        assert ks_two_sample(a.x, b.x).passed and ks_two_sample(a.y, b.y).passed
        assert a.sampler_id == "gmo_shock"

    def test_gmo_non_exponential_margins(self):
        g = generalized_marshall_olkin(LomaxMarginal(2, 1), ExponentialMarginal(2),
                                       ExponentialMarginal(1))
        b = sample_gmo(g, N, 9)
        assert ks_statistic(b.x, g.F.cdf).passed
        p, se = estimate(b, "survival", x=0.5, y=0.2)
        assert abs(p - g.survival(0.5, 0.2)) < 4.5 * se


class TestUniversalSampler:
    @pytest.mark.parametrize("name", list(LAWS))
    def test_survival_at_25_points(self, name):
        d = LAWS[name]
        b = sample_blm(d, N, RngStream(2024, 3))
        assert b.sampler_id == "blm_universal"
        for x, y in _points(d):
            p, se = estimate(b, "survival", x=x, y=y)
            sd = math.sqrt(d.survival(x, y) * (1 - d.survival(x, y)) / N)
            assert abs(p - d.survival(x, y)) < 4.5 * max(sd, 1e-12), (x, y)

    @pytest.mark.parametrize("name", ["mo", "bb", "freund", "hazard"])
    def test_margins_pass_ks(self, name):
        d = LAWS[name]
        b = sample_blm(d, N, RngStream(2024, 4))
        assert ks_statistic(b.x, d.F.cdf).passed
        assert ks_statistic(b.y, d.G.cdf).passed
        assert ks_statistic(np.minimum(b.x, b.y), lambda t: 1 - np.exp(-d.theta * t)).passed

    def test_continuous_law_has_no_ties(self):
        b = sample_blm(LAWS["bb"], N, 1)
        assert estimate(b, "atom_fraction")[0] == 0.0

    def test_atom_fraction(self):
        d = LAWS["lomax"]
        b = sample_blm(d, N, 2)
        p, se = estimate(b, "atom_fraction")
        assert abs(p - d.atom_mass()) < 4.5 * se

    def test_agrees_with_shock_sampler(self):
        a = sample_blm(LAWS["mo"], N, RngStream(8, 0))
        b = sample_mo((1, 2, 3), N, RngStream(8, 1))
        assert ks_two_sample(a.x - a.y, b.x - b.y).passed

    def test_invalid_law(self):
        d = make_blm(ExponentialMarginal(1), ExponentialMarginal(1), 3.0, strict=False)
        with pytest.raises(PreconditionError):
            sample_blm(d, 10, 0)
        with pytest.raises(ArgumentError):
            sample_blm(generalized_marshall_olkin(ExponentialMarginal(1), ExponentialMarginal(1),
                                                  ExponentialMarginal(1)), 10, 0)

    @settings(max_examples=10)
    @given(st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0),
           st.integers(0, 2**32))
    def test_samples_nonnegative_and_finite(self, a, b, c, seed):
        s = sample_blm(block_basu(a, b, c), 200, seed)
        assert np.all(np.isfinite(s.pairs)) and np.all(s.pairs >= 0)


@pytest.fixture(scope="module")
def batch():
    return sample_blm(LAWS["freund"], N, RngStream(77))


class TestEstimators:
    def test_moments_within_error(self, batch):
        d = LAWS["freund"]
        for f, ref in (("product_moment", product_moment(d, 1, 1)),
                       ("mttf_series", mttf(d, "series")),
                       ("mttf_parallel", mttf(d, "parallel")),
                       ("correlation", pearson_correlation(d))):
            v, se = estimate(batch, f)
            assert abs(v - ref) < 4.5 * se, f

    def test_errors(self, batch):
        with pytest.raises(ArgumentError):
            estimate(batch, "median")
        with pytest.raises(ArgumentError):
            estimate(batch, "survival")
        with pytest.raises(PreconditionError):
            estimate(sample_mo((1, 1, 1), 50, 0), "mttf_series")


class TestStatistics:
    def test_ks_detects_wrong_law(self):
        x = RngStream(1).generator.exponential(1.0, 2000)
        assert ks_statistic(x, lambda t: 1 - np.exp(-t)).passed
        r = ks_statistic(x, lambda t: 1 - np.exp(-2 * t))
        assert not r.passed and r.critical == pytest.approx(1.628 / math.sqrt(2000))

    def test_ks_small_sample(self):
        with pytest.raises(PreconditionError):
            ks_statistic(np.ones(10), lambda t: t)

    def test_chi2_independence(self):
        g = RngStream(4).generator
        assert chi2_independence(g.random(5000), g.random(5000)).passed
        b = sample_mo((1, 1, 3), 5000, 4)
        assert not chi2_independence(b.x, b.y).passed

    def test_chi2_rejects_constant(self):
        with pytest.raises(PreconditionError):
            chi2_independence(np.ones(500), np.arange(500.0))
