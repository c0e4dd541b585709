import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskkit import distributions as dd
from riskkit.discretize import (
    DISCRETIZATION_METHODS,
    cdf_bounds_report,
    discretize,
    step_convergence,
)
from riskkit.errors import ParameterError

GAMMA5 = dd.Gamma(a=5)


class TestMassDispersal:
    def test_reference_mean(self):
        arith = discretize(GAMMA5, "massdispersal", m=50000, h=0.01)
        assert arith.mean() == pytest.approx(5.0, abs=1e-10)

    def test_mass_is_exactly_preserved(self):
        arith = discretize(GAMMA5, "massdispersal", m=200, h=0.1)
        assert arith.fj.sum() == pytest.approx(1.0, abs=1e-12)

    def test_nodes_are_arithmetic_from_zero(self):
        arith = discretize(GAMMA5, "massdispersal", m=50, h=0.25)
        assert arith.nodes[0] == 0.0
        assert np.allclose(np.diff(arith.nodes), 0.25)

    def test_first_node_mass(self):
        arith = discretize(GAMMA5, "massdispersal", m=64, h=0.5)
        assert arith.fj[0] == pytest.approx(float(GAMMA5.cdf(0.25)), rel=1e-12)


class TestOtherMethods:
    def test_lower_first_node_is_cdf_at_zero(self):
        for sev in (GAMMA5, dd.Exponential(rate=1.0)):
            arith = discretize(sev, "lower_discretisation", m=40, h=0.5)
            assert arith.fj[0] == float(sev.cdf(0.0))

    def test_lower_leaves_tail_mass_out(self):
        arith = discretize(GAMMA5, "lower_discretisation", m=20, h=1.0)
        assert arith.tail_mass == pytest.approx(float(GAMMA5.sf(19.0)), rel=1e-10)
        assert arith.fj.sum() == pytest.approx(1.0 - arith.tail_mass, abs=1e-12)

    def test_upper_mass_preserved(self):
        arith = discretize(GAMMA5, "upper_discretisation", m=20, h=1.0)
        assert arith.fj.sum() == pytest.approx(1.0, abs=1e-12)

    def test_localmoments_preserves_truncated_mean(self):
        arith = discretize(GAMMA5, "localmoments", m=20, h=1.0)
        assert arith.mean() == pytest.approx(GAMMA5.lev(19.0), rel=1e-8)
        assert arith.fj.sum() == pytest.approx(1.0, abs=1e-10)

    def test_localmoments_small_h_mean(self):
        arith = discretize(dd.Exponential(rate=1.0), "localmoments", m=200, h=0.1)
        assert arith.mean() == pytest.approx(
            dd.Exponential(rate=1.0).lev(199 * 0.1), rel=1e-8
        )


class TestBounds:
    @pytest.mark.parametrize(
        "sev,h,m",
        [
            (GAMMA5, 1.0, 20),
            (dd.Exponential(rate=1.0), 0.5, 40),
            (GAMMA5, 0.2, 99),
        ],
    )
    def test_upper_lower_bracket_true_cdf(self, sev, h, m):
        report = cdf_bounds_report(sev, m, h)
        assert report.ordered

    def test_lower_equals_true_cdf_at_nodes(self):
        report = cdf_bounds_report(GAMMA5, 20, 1.0)
        assert np.abs(report.lower_cdf - report.true_cdf).max() < 1e-12


class TestLayerTransforms:
    def test_deductible_builds_conditional_excess(self):
        d = 5.0
        arith = discretize(GAMMA5, "massdispersal", m=4000, h=0.01, deductible=d)
        expected = (GAMMA5.censored_moment(1, d, math.inf)) / float(GAMMA5.sf(d))
        # the lattice spans [0, 39.99]; the gamma tail there is negligible
        assert arith.mean() == pytest.approx(expected, rel=1e-6)

    def test_cover_adjusts_step_exactly(self):
        arith = discretize(GAMMA5, "massdispersal", m=101, deductible=5.0, cover=20.0)
        assert arith.h == pytest.approx(20.0 / 100, abs=0)
        assert arith.nodes[-1] == pytest.approx(20.0, rel=1e-14)

    def test_user_step_is_an_upper_bound_with_cover(self):
        arith = discretize(GAMMA5, "massdispersal", m=10, h=0.5, cover=20.0)
        assert arith.h <= 0.5 + 1e-15
        assert arith.nodes[-1] == pytest.approx(20.0, rel=1e-14)

    def test_capped_mean_matches_censored_moment(self):
        arith = discretize(GAMMA5, "massdispersal", m=2**14, deductible=5.0, cover=20.0)
        expected = GAMMA5.censored_moment(1, 5.0, 20.0) / float(GAMMA5.sf(5.0))
        assert arith.mean() == pytest.approx(expected, rel=1e-6)

    def test_atom_at_cover_mass(self):
        arith = discretize(GAMMA5, "massdispersal", m=2**12, deductible=0.0, cover=5.0)
        atom = float(GAMMA5.sf(5.0))
        assert arith.fj[-1] == pytest.approx(atom, rel=1e-3)


class TestStepConvergence:
    def test_all_methods_approach_true_cdf(self):
        # mean step-function cdf error over fixed points shrinks as h halves
        rng = np.random.default_rng(0)
        xs = rng.uniform(1.0, 12.0, 25)
        true = GAMMA5.cdf(xs)
        for method in DISCRETIZATION_METHODS:
            errs = []
            for m, h in [(50, 0.4), (100, 0.2), (200, 0.1)]:
                arith = discretize(GAMMA5, method, m=m, h=h)
                cum = arith.cdf_at_nodes()
                idx = np.clip(np.searchsorted(arith.nodes, xs, side="right") - 1, 0, None)
                errs.append(np.abs(cum[idx] - true).mean())
            assert errs[0] > errs[1] > errs[2]

    def test_halving_diagnostic_shrinks(self):
        d1 = step_convergence(GAMMA5, "massdispersal", 50, 0.4)
        d2 = step_convergence(GAMMA5, "massdispersal", 100, 0.2)
        d3 = step_convergence(GAMMA5, "massdispersal", 200, 0.1)
        assert d1 > d2 > d3
        # the lower method's cdf is exact at shared nodes, so its diagnostic
        # collapses to zero rather than merely shrinking
        assert step_convergence(GAMMA5, "lower_discretisation", 50, 0.4) == 0.0


class TestValidation:
    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            discretize(GAMMA5, "nosuch", m=10, h=0.1)
        with pytest.raises(ParameterError):
            discretize(GAMMA5, "massdispersal", m=1, h=0.1)
        with pytest.raises(ParameterError):
            discretize(GAMMA5, "massdispersal", m=10, h=-0.1, cover=5.0)
        with pytest.raises(ParameterError):
            discretize(GAMMA5, "massdispersal", m=10, h=None)  # inf cover needs h
        with pytest.raises(ParameterError):
            discretize(GAMMA5, "massdispersal", m=10, h=0.1, deductible=-2)

    def test_short_lattice_warns_not_fails(self):
        arith = discretize(GAMMA5, "massdispersal", m=10, h=0.1)
        assert any("mass" in w for w in arith.warnings)

    def test_negative_mass_clamped(self):
        arith = discretize(GAMMA5, "localmoments", m=30, h=0.7)
        assert (arith.fj >= 0).all()


@settings(max_examples=20, deadline=None)
@given(
    a=st.floats(0.8, 8.0),
    h=st.floats(0.05, 0.8),
)
def test_massdispersal_mass_one_property(a, h):
    arith = discretize(dd.Gamma(a=a), "massdispersal", m=256, h=h)
    assert arith.fj.sum() == pytest.approx(1.0, abs=1e-12)
    assert (arith.fj >= 0.0).all()
