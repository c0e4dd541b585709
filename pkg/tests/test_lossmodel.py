import math

import numpy as np
import pytest

from riskkit import distributions as dd
from riskkit import lossmodel as lm
from riskkit.errors import StructureError

GAMMA5 = dd.Gamma(a=5)
POISSON4 = lm.FrequencyModel(dd.Poisson(mu=4))
FFT_ENGINE = lm.EngineConfig(aggr_loss_dist_method="fft", n_aggr_dist_nodes=2**17)


class TestLayerValidation:
    def test_reinstatements_imply_aggregate_cover(self):
        layer = lm.Layer(cover=100, deductible=0, aggr_deductible=100, n_reinst=2)
        assert layer.effective_aggr_cover == 300.0
        assert layer.has_aggregate_modifiers

    def test_reinstatements_need_finite_cover(self):
        with pytest.raises(StructureError):
            lm.Layer(n_reinst=2)

    def test_reinstatements_exclude_explicit_aggregate_cover(self):
        with pytest.raises(StructureError):
            lm.Layer(cover=100, n_reinst=1, aggr_cover=500)

    def test_percentage_vector_broadcast(self):
        layer = lm.Layer(cover=50, n_reinst=3, reinst_percentage=0.6)
        assert layer.reinst_percentage == (0.6, 0.6, 0.6)
        layer2 = lm.Layer(cover=50, n_reinst=2, reinst_percentage=[0.5, 1.0])
        assert layer2.reinst_percentage == (0.5, 1.0)

    def test_bad_values(self):
        with pytest.raises(StructureError):
            lm.Layer(share=0.0)
        with pytest.raises(StructureError):
            lm.Layer(deductible=-1)
        with pytest.raises(StructureError):
            lm.Layer(cover=100, n_reinst=1, reinst_percentage=1.5)
        with pytest.raises(StructureError):
            lm.PolicyStructure([])


class TestXlCosting:
    layer = lm.Layer(cover=20, deductible=5)

    def test_dist_premium_matches_published_run(self):
        res = lm.cost_layer(POISSON4, GAMMA5, self.layer, FFT_ENGINE)
        assert res.pure_premium_dist == pytest.approx(3.509346100359707, abs=1e-5)

    def test_closed_premium(self):
        res = lm.cost_layer(POISSON4, GAMMA5, self.layer)
        assert res.pure_premium_closed == pytest.approx(3.50934614394912, abs=1e-6)

    def test_share_halves_closed_premium(self):
        full = lm.cost_layer(POISSON4, GAMMA5, self.layer)
        half = lm.cost_layer(
            POISSON4, GAMMA5, lm.Layer(cover=20, deductible=5, share=0.5)
        )
        assert half.pure_premium_closed == pytest.approx(
            0.5 * full.pure_premium_closed, rel=1e-14
        )

    def test_moments_both_routes(self):
        dist = lm.moments(POISSON4, GAMMA5, self.layer, FFT_ENGINE, use_dist=True)
        closed = lm.moments(POISSON4, GAMMA5, self.layer, use_dist=False)
        assert dist.coeff_variation == pytest.approx(1.0001481880266856, abs=1e-6)
        assert closed.coeff_variation == pytest.approx(1.0001481667319252, rel=1e-10)
        assert dist.skewness == pytest.approx(1.3814094240544392, abs=1e-5)
        assert closed.skewness == pytest.approx(1.3814094309741256, rel=1e-10)

    def test_recursive_engine_agrees(self):
        engine = lm.EngineConfig(
            aggr_loss_dist_method="recursive",
            n_aggr_dist_nodes=2**13,
            n_sev_discr_nodes=2**10,
        )
        res = lm.cost_layer(POISSON4, GAMMA5, self.layer, engine)
        assert res.pure_premium_dist == pytest.approx(res.pure_premium_closed, rel=1e-4)

    def test_mc_engine_close(self):
        engine = lm.EngineConfig(
            aggr_loss_dist_method="mc", n_sim=200_000, random_state=3
        )
        res = lm.cost_layer(POISSON4, GAMMA5, self.layer, engine)
        assert res.pure_premium_dist == pytest.approx(res.pure_premium_closed, rel=0.02)


class TestReinstatements:
    def test_published_single_layer_value(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=0.5))
        sev = dd.Pareto2(shape=1.2, scale=100)
        layer = lm.Layer(
            cover=100, deductible=0, aggr_deductible=100, n_reinst=2, reinst_percentage=1
        )
        res = lm.cost_layer(freq, sev, layer, FFT_ENGINE)
        assert res.pure_premium_dist == pytest.approx(4.319350355177216, abs=1e-6)

    def test_free_reinstatements_equal_stop_loss(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=0.5))
        sev = dd.Pareto2(shape=1.2, scale=100)
        free = lm.Layer(
            cover=100, deductible=0, aggr_deductible=100, n_reinst=2, reinst_percentage=0
        )
        res = lm.cost_layer(freq, sev, free, FFT_ENGINE)
        agg, _ = lm.build_aggregate(freq, sev, free, FFT_ENGINE)
        assert res.pure_premium_dist == pytest.approx(
            agg.layer_expectation(300.0, 100.0), rel=1e-12
        )

    def test_zero_reinstatements_reduce_to_stop_loss_with_u_equal_c(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=0.5))
        sev = dd.Pareto2(shape=1.2, scale=100)
        k0 = lm.Layer(cover=100, deductible=0, aggr_deductible=100, n_reinst=0)
        res = lm.cost_layer(freq, sev, k0, FFT_ENGINE)
        agg, _ = lm.build_aggregate(freq, sev, k0, FFT_ENGINE)
        assert res.pure_premium_dist == pytest.approx(
            agg.layer_expectation(100.0, 100.0), rel=1e-12
        )

    def test_published_multi_layer_values(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=0.5))
        sev = dd.GenPareto(c=0.834, loc=0, scale=83.34)
        policy = lm.PolicyStructure(
            [
                lm.Layer(cover=100, deductible=100, share=0.5),
                lm.Layer(cover=200, deductible=100, n_reinst=2, reinst_percentage=0.6),
                lm.Layer(cover=100, deductible=100, aggr_cover=200),
            ]
        )
        results = lm.cost_policy(freq, sev, policy, FFT_ENGINE)
        expected = [8.479087307062226, 25.99131088702302, 16.88704720494799]
        for res, target in zip(results, expected):
            assert res.pure_premium_dist == pytest.approx(target, abs=1e-4)
        # only the share-only layer has the closed form
        assert results[0].pure_premium_closed == pytest.approx(8.479087307840043, abs=1e-6)
        assert results[1].pure_premium_closed is None
        assert results[2].pure_premium_closed is None


class TestWarningsBehaviour:
    def test_missing_method_warns_instead_of_raising(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=0.5))
        sev = dd.GenPareto(c=0.834, loc=0, scale=83.34)
        policy = lm.PolicyStructure(
            [
                lm.Layer(cover=100, deductible=100, share=0.5),
                lm.Layer(cover=200, deductible=100, n_reinst=2, reinst_percentage=0.6),
            ]
        )
        results = lm.cost_policy(freq, sev, policy, engine=None)
        assert results[0].pure_premium_closed is not None
        assert results[0].pure_premium_dist is None
        assert not results[0].warnings
        assert results[1].pure_premium_dist is None
        assert results[1].pure_premium_closed is None
        assert any("omitted" in w.message for w in results[1].warnings)
        assert str(results[1].warnings[0]).startswith("WARNING|lossmodel|")


class TestClosedFormInvariants:
    def test_mean_identity_no_modifiers(self):
        res = lm.moments(POISSON4, GAMMA5, lm.Layer(), use_dist=False)
        assert res.mean == pytest.approx(4 * 5, rel=1e-12)

    def test_closed_moments_reference_case(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=3), threshold=10000)
        sev = dd.Lognormal(shape=1.3, scale=36315.49)
        res = lm.moments(freq, sev, lm.Layer(deductible=10000), use_dist=False)
        assert res.mean == pytest.approx(268836.903121836, rel=1e-9)
        assert res.coeff_variation == pytest.approx(1.3552028508481138, rel=1e-9)
        assert res.skewness == pytest.approx(7.023991577153764, rel=1e-9)

    def test_closed_cov_poisson_gamma(self):
        res = lm.moments(POISSON4, GAMMA5, lm.Layer(), use_dist=False)
        assert res.coeff_variation == pytest.approx(0.5477225575051661, rel=1e-12)
        assert res.skewness == pytest.approx(0.6390096504226938, rel=1e-12)

    def test_skewness_constant_severity(self):
        # compound count with degenerate severity keeps the count skewness
        mu = 3.7
        freq = lm.FrequencyModel(dd.Poisson(mu=mu))
        sev = dd.Uniform(9.9999999, 10.0000001)
        res = lm.moments(freq, sev, lm.Layer(), use_dist=False)
        assert res.skewness == pytest.approx(1 / math.sqrt(mu), rel=1e-6)

    def test_nonpoisson_closed_moments_match_dist(self):
        freq = lm.FrequencyModel(dd.NegativeBinomial(n=3.0, p=0.5))
        engine = lm.EngineConfig(
            aggr_loss_dist_method="fft",
            n_aggr_dist_nodes=2**15,
            n_sev_discr_nodes=2**12,
        )
        closed = lm.moments(freq, GAMMA5, lm.Layer(cover=30.0), use_dist=False)
        dist = lm.moments(freq, GAMMA5, lm.Layer(cover=30.0), engine, use_dist=True)
        assert dist.mean == pytest.approx(closed.mean, rel=1e-6)
        assert dist.coeff_variation == pytest.approx(closed.coeff_variation, rel=1e-5)
        assert dist.skewness == pytest.approx(closed.skewness, rel=1e-4)

    def test_closed_moments_reject_aggregate_modifiers(self):
        with pytest.raises(StructureError):
            lm.moments(POISSON4, GAMMA5, lm.Layer(aggr_deductible=5.0), use_dist=False)

    def test_deductible_below_threshold_rejected(self):
        freq = lm.FrequencyModel(dd.Poisson(mu=3), threshold=10.0)
        with pytest.raises(StructureError):
            lm.cost_layer(freq, GAMMA5, lm.Layer(deductible=5.0), FFT_ENGINE)


class TestPremiumStructureProperties:
    def test_monotonicity_in_modifiers(self):
        base = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=20, deductible=5))
        for d in (6.0, 8.0, 12.0):
            res = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=20, deductible=d))
            assert res.pure_premium_closed < base.pure_premium_closed
            base = res
        prev = 0.0
        for c in (5.0, 10.0, 20.0, 40.0):
            res = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=c, deductible=5))
            assert res.pure_premium_closed > prev
            prev = res.pure_premium_closed

    def test_aggregate_modifier_monotonicity(self):
        prev = math.inf
        for v in (0.0, 5.0, 10.0, 20.0):
            layer = lm.Layer(cover=20, deductible=5, aggr_deductible=v)
            res = lm.cost_layer(POISSON4, GAMMA5, layer, FFT_ENGINE)
            assert res.pure_premium_dist < prev
            prev = res.pure_premium_dist

    def test_contiguous_layer_additivity(self):
        d, c1, c2 = 5.0, 7.0, 6.0
        lo = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=c1, deductible=d))
        hi = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=c2, deductible=d + c1))
        wide = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=c1 + c2, deductible=d))
        assert lo.pure_premium_closed + hi.pure_premium_closed == pytest.approx(
            wide.pure_premium_closed, abs=1e-10
        )

    def test_dist_vs_closed_agreement(self):
        res = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=20, deductible=5), FFT_ENGINE)
        assert abs(res.pure_premium_dist / res.pure_premium_closed - 1) <= 1e-5


class TestReports:
    def test_costing_summary_contents(self):
        res = lm.cost_layer(POISSON4, GAMMA5, lm.Layer(cover=20, deductible=5), FFT_ENGINE)
        text = lm.costing_summary(res)
        assert "Costing Summary: Layer 1" in text
        assert "3.51" in text
        assert "Share participation" in text

    def test_layer_summary_reinstatement_lines(self):
        layer = lm.Layer(cover=200, deductible=100, n_reinst=2, reinst_percentage=0.6)
        text = lm.layer_summary(layer, idx=1)
        assert "Policy Structure Summary: layer 2" in text
        assert "Reinst. layer percentage 1" in text
        assert "Reinst. layer percentage 2" in text
        assert "0.6" in text
