import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from riskkit import distributions as dd
from riskkit.errors import MomentError, ParameterError


class TestDiscreteBasics:
    def test_poisson_pmf_at_zero(self):
        assert dd.Poisson(mu=2).pmf(0) == pytest.approx(math.exp(-2), rel=1e-12)

    def test_ztpoisson_pmf_zero_is_exactly_zero(self):
        assert dd.frequency("ztpoisson", {"mu": 2}).pmf(0) == 0.0

    def test_zm_pmf_zero_is_p0m(self):
        zm = dd.frequency("zmpoisson", {"mu": 2, "p0M": 0.3})
        assert float(zm.pmf(0)) == pytest.approx(0.3, abs=0)

    def test_ztpoisson_exact_mean(self):
        assert dd.frequency("ztpoisson", {"mu": 2}).mean() == pytest.approx(
            2.3130352854993315, rel=1e-12
        )

    def test_pgf_at_one_is_one(self):
        for name, par in [
            ("poisson", {"mu": 3}),
            ("binom", {"n": 10, "p": 0.3}),
            ("geom", {"p": 0.4}),
            ("nbinom", {"n": 2.5, "p": 0.55}),
            ("logser", {"p": 0.6}),
            ("ztgeom", {"p": 0.4}),
            ("zmnbinom", {"n": 2.5, "p": 0.55, "p0M": 0.1}),
        ]:
            assert float(dd.frequency(name, par).pgf(1.0)) == pytest.approx(1.0, rel=1e-12)

    def test_poisson_pgf_values(self):
        p = dd.Poisson(mu=3)
        assert float(p.pgf(0.0)) == pytest.approx(math.exp(-3), rel=1e-12)
        assert float(dd.frequency("ztpoisson", {"mu": 2}).pgf(0.0)) == 0.0

    def test_pgf_radius_error(self):
        with pytest.raises(ParameterError):
            dd.Geometric(p=0.2).pgf(2.0)

    def test_pmf_sums_to_one(self):
        for name, par in [
            ("poisson", {"mu": 4}),
            ("nbinom", {"n": 3, "p": 0.35}),
            ("zmgeom", {"p": 0.3, "p0M": 0.2}),
            ("logser", {"p": 0.7}),
        ]:
            dist = dd.frequency(name, par)
            ks = np.arange(0, 500)
            total = float(dist.pmf(ks).sum())
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_parameter_errors_at_construction(self):
        with pytest.raises(ParameterError):
            dd.Poisson(mu=-1)
        with pytest.raises(ParameterError):
            dd.Binomial(n=0, p=0.5)
        with pytest.raises(ParameterError):
            dd.frequency("zmpoisson", {"mu": 1, "p0M": 1.0})
        with pytest.raises(ParameterError):
            dd.frequency("nosuch", {})


class TestRecursionCoefficients:
    families = [
        ("poisson", {"mu": 2.5}),
        ("binom", {"n": 12, "p": 0.25}),
        ("geom", {"p": 0.45}),
        ("nbinom", {"n": 3.2, "p": 0.5}),
    ]

    @pytest.mark.parametrize("name,par", families)
    def test_ab0_recursion(self, name, par):
        dist = dd.frequency(name, par)
        a, b = dist.ab()
        ks = np.arange(1, 201)
        lhs = dist.pmf(ks)
        rhs = (a + b / ks) * dist.pmf(ks - 1)
        assert np.abs(lhs - rhs).max() < 1e-12

    @pytest.mark.parametrize("name,par", families)
    def test_ab1_recursion_for_modified(self, name, par):
        for wrap in ("zt", "zm"):
            full = dict(par, p0M=0.15) if wrap == "zm" else par
            dist = dd.frequency(f"{wrap}{name}", full)
            a, b = dist.ab()
            ks = np.arange(2, 201)
            lhs = dist.pmf(ks)
            rhs = (a + b / ks) * dist.pmf(ks - 1)
            assert np.abs(lhs - rhs).max() < 1e-12
            assert dist.recursion_class == "ab1"

    def test_logser_is_ab1(self):
        dist = dd.LogSeries(p=0.6)
        a, b = dist.ab()
        ks = np.arange(2, 101)
        assert np.abs(dist.pmf(ks) - (a + b / ks) * dist.pmf(ks - 1)).max() < 1e-14

    def test_zm_relates_to_zt_pmf(self):
        base = {"n": 4, "p": 0.3}
        zm = dd.frequency("zmbinom", dict(base, p0M=0.25))
        zt = dd.frequency("ztbinom", base)
        ks = np.arange(1, 50)
        assert np.abs(zm.pmf(ks) - (1 - 0.25) * zt.pmf(ks)).max() < 1e-12


class TestThinning:
    @pytest.mark.parametrize(
        "name,par",
        [
            ("poisson", {"mu": 2.5}),
            ("binom", {"n": 9, "p": 0.4}),
            ("geom", {"p": 0.45}),
            ("nbinom", {"n": 3.2, "p": 0.5}),
            ("logser", {"p": 0.6}),
            ("ztpoisson", {"mu": 1.5}),
            ("zmnbinom", {"n": 2, "p": 0.6, "p0M": 0.3}),
        ],
    )
    def test_thinned_pgf_identity(self, name, par):
        # thinning by t composes the pgf with 1 - t + t s
        dist = dd.frequency(name, par)
        t = 0.37
        thinned = dist.thin(t)
        for s in (0.0, 0.25, 0.8, 1.0):
            assert float(thinned.pgf(s)) == pytest.approx(
                float(dist.pgf(1 - t + t * s)), rel=1e-12, abs=1e-14
            )

    def test_thinned_mean_scales(self):
        dist = dd.NegativeBinomial(n=2.5, p=0.4)
        assert dist.thin(0.2).mean() == pytest.approx(0.2 * dist.mean(), rel=1e-12)


class TestContinuousBasics:
    def test_gamma_pdf_at_mode(self):
        g = dd.Gamma(a=5)
        expected = 4**4 * math.exp(-4) / math.gamma(5)
        assert float(g.pdf(4.0)) == pytest.approx(expected, rel=1e-12)

    def test_lognormal_reference_moments(self):
        ln = dd.Lognormal(shape=1.3, scale=36315.49)
        assert ln.mean() == pytest.approx(84541.68, rel=1e-4)
        assert ln.std() == pytest.approx(177728.30, rel=1e-4)

    def test_uniform_mean(self):
        assert dd.Uniform(0, 1).mean() == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize(
        "name,par",
        [
            ("gamma", {"a": 5}),
            ("lognormal", {"shape": 1.3, "scale": 36315.49}),
            ("exponential", {"rate": 0.5}),
            ("genpareto", {"c": 0.3, "loc": 0, "scale": 2.0}),
            ("pareto1", {"shape": 2.5, "min": 10.0}),
            ("pareto2", {"shape": 1.2, "scale": 100.0}),
            ("beta", {"a": 2, "b": 3}),
            ("burr12", {"c": 2.0, "d": 3.0, "scale": 5.0}),
            ("weibull", {"c": 1.5, "scale": 3.0}),
            ("uniform", {"a": 0, "b": 1}),
        ],
    )
    def test_ppf_cdf_roundtrip(self, name, par):
        dist = dd.severity(name, par)
        qs = np.linspace(0.01, 0.99, 99)
        xs = dist.ppf(qs)
        assert np.abs(dist.cdf(xs) - qs).max() < 1e-9

    def test_cdf_limits(self):
        g = dd.Gamma(a=2, scale=3)
        assert float(g.cdf(0.0)) == 0.0
        assert float(g.cdf(np.inf)) == 1.0

    def test_moment_error_for_heavy_tails(self):
        p2 = dd.Pareto2(shape=1.2, scale=100)
        assert p2.mean() > 0
        with pytest.raises(MomentError):
            p2.var()
        with pytest.raises(MomentError):
            p2.censored_moment(2, 0.0, math.inf)
        gp = dd.GenPareto(c=1 / 0.9, loc=0, scale=1 / 0.9)
        with pytest.raises(MomentError):
            gp.mean()


class TestLevAndCensoredMoments:
    def test_lev_at_inf_is_mean(self):
        assert dd.Gamma(a=5).lev(math.inf) == pytest.approx(5.0, rel=1e-12)

    def test_uniform_lev_half(self):
        # int_0^0.5 t dt + 0.5 * P(U > 0.5) = 0.125 + 0.25
        assert dd.Uniform(0, 1).lev(0.5) == pytest.approx(0.375, rel=1e-12)

    def test_exponential_lev_closed_form(self):
        e = dd.Exponential(rate=1.0)
        for u in (0.2, 1.0, 3.5):
            assert e.lev(u) == pytest.approx(1 - math.exp(-u), rel=1e-12)

    def test_uniform_censored_above_half(self):
        # int_{0.5}^{1} (t - 0.5) dt = 0.125
        assert dd.Uniform(0, 1).censored_moment(1, 0.5, math.inf) == pytest.approx(
            0.125, rel=1e-12
        )

    def test_censored_full_layer_is_mean(self):
        for dist in (dd.Gamma(a=3, scale=2), dd.Weibull(c=2, scale=5)):
            assert dist.censored_moment(1, 0.0, math.inf) == pytest.approx(
                dist.mean(), rel=1e-12
            )

    def test_lev_equals_censored_from_zero(self):
        dist = dd.Lognormal(shape=1.0, scale=10.0)
        for u in (1.0, 10.0, 50.0):
            assert dist.lev(u) == pytest.approx(
                dist.censored_moment(1, 0.0, u), rel=1e-10
            )

    @pytest.mark.parametrize(
        "name,par",
        [
            ("gamma", {"a": 5}),
            ("lognormal", {"shape": 1.3, "scale": 36315.49}),
            ("weibull", {"c": 1.5, "scale": 3.0}),
            ("pareto2", {"shape": 2.2, "scale": 100.0}),
            ("genpareto", {"c": 0.3, "loc": 0, "scale": 2.0}),
        ],
    )
    def test_censored_moment_against_quadrature(self, name, par):
        dist = dd.severity(name, par)
        scale = par.get("scale", 1.0)
        d, c = 0.7 * scale, 2.0 * scale
        for n in (1, 2):
            direct, _ = integrate.quad(
                lambda t: n * t ** (n - 1) * float(dist.sf(d + t)),
                0.0,
                c,
                epsabs=1e-12,
                epsrel=1e-11,
                limit=200,
            )
            assert dist.censored_moment(n, d, c) == pytest.approx(direct, rel=1e-8)

    def test_pareto2_lev_closed_matches_quadrature(self):
        p2 = dd.Pareto2(shape=1.2, scale=100)
        for u in (10.0, 100.0, 1000.0):
            assert p2.lev(u) == pytest.approx(
                p2._censored_moment_quad(1, 0.0, u), rel=1e-9
            )

    def test_table_reference_expected_excess(self):
        # 3 E[(Z - 10000)+] for the lognormal used throughout costing
        ln = dd.Lognormal(shape=1.3, scale=36315.49)
        val = 3 * ln.censored_moment(1, 10000.0, math.inf)
        # frozen from the closed-form partial-moment evaluation
        assert val == pytest.approx(225665.01903, rel=1e-9)
        # conditional on exceeding the threshold it gives the published mean
        assert val / ln.sf(10000.0) == pytest.approx(268836.903121836, rel=1e-10)


class TestSampling:
    def test_rvs_deterministic(self):
        for dist in (
            dd.Poisson(mu=3),
            dd.frequency("ztpoisson", {"mu": 2}),
            dd.Gamma(a=5),
        ):
            a = dist.rvs(5, random_state=42)
            b = dist.rvs(5, random_state=42)
            assert np.array_equal(a, b)

    def test_ztpoisson_sample_mean(self):
        zt = dd.frequency("ztpoisson", {"mu": 2})
        sample = zt.rvs(10**5, random_state=1)
        assert abs(sample.mean() - 2.3130352854993315) < 0.02

    def test_gamma_sample_mean_clt(self):
        g = dd.Gamma(a=5)
        sample = g.rvs(10**6, random_state=7)
        assert abs(sample.mean() - 5.0) < 4 * math.sqrt(5) / 1e3

    def test_zm_sampler_matches_pmf(self):
        zm = dd.frequency("zmpoisson", {"mu": 2, "p0M": 0.4})
        sample = zm.rvs(10**5, random_state=11)
        assert abs((sample == 0).mean() - 0.4) < 0.01
        assert abs(sample.mean() - zm.mean()) < 4 * zm.std() / math.sqrt(10**5)


@settings(max_examples=30, deadline=None)
@given(
    mu=st.floats(0.1, 20.0),
    k=st.integers(1, 150),
)
def test_poisson_recursion_property(mu, k):
    dist = dd.Poisson(mu=mu)
    a, b = dist.ab()
    lhs = float(dist.pmf(k))
    rhs = (a + b / k) * float(dist.pmf(k - 1))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


@settings(max_examples=30, deadline=None)
@given(p0m=st.floats(0.0, 0.95), mu=st.floats(0.2, 10.0))
def test_zm_mass_relation_property(p0m, mu):
    zm = dd.ZeroModified(dd.Poisson(mu=mu), p0m)
    base = dd.Poisson(mu=mu)
    ks = np.arange(1, 80)
    expected = (1 - p0m) / (1 - base.p0()) * base.pmf(ks)
    assert np.abs(zm.pmf(ks) - expected).max() < 1e-12
