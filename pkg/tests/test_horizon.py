import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hacgov.core import (
    ARTIFICIAL,
    HUMAN,
    AgentDecl,
    AutonomyProfile,
    HacSpec,
    InteractionGraph,
    WeightVector,
    validate_hac,
)
from hacgov.cycles import MixedCycleSummary, summarize_mixed_cycles
from hacgov.errors import ValidationError
from hacgov.fixtures import clinical_hac, governance_hac, trading_hac
from hacgov.horizon import (
    GOVERNABLE,
    INDETERMINATE,
    NO_MIXED_CYCLE,
    UNGOVERNABLE,
    accountability_horizon,
    analyze,
    classify,
    collective_autonomy_index,
    combined_horizon,
    deficit_and_budget,
    min_compound_autonomy,
    relaxed_horizon,
)


def summary(c_min, m_star=frozenset()):
    return MixedCycleSummary(c_min_size=c_min, m_star=frozenset(m_star))


class TestCollectiveAutonomyIndex:
    def test_clinical_value(self):
        value, warning = collective_autonomy_index(clinical_hac())
        assert value == pytest.approx(0.376, abs=1e-3)
        assert not warning

    def test_single_agent_unit_centrality(self):
        spec = validate_hac(
            HacSpec(
                agents=(
                    AgentDecl("h1", HUMAN),
                    AgentDecl("m1", ARTIFICIAL, AutonomyProfile(0.5, 0.5, 0.5, 0.5)),
                ),
                graph=InteractionGraph(nodes=("h1", "m1"), edges=(("m1", "h1"),)),
                weights=WeightVector(0.25, 0.25, 0.25, 0.25),
                tau=0.1,
            )
        )
        value, warning = collective_autonomy_index(spec)
        assert value == pytest.approx(0.5, abs=1e-12)
        assert not warning

    def test_all_zero_out_degree_warns(self):
        spec = validate_hac(
            HacSpec(
                agents=(
                    AgentDecl("h1", HUMAN),
                    AgentDecl("m1", ARTIFICIAL, AutonomyProfile(0.9, 0.9, 0.9, 0.9)),
                ),
                graph=InteractionGraph(nodes=("h1", "m1"), edges=(("h1", "m1"),)),
                weights=WeightVector(0.25, 0.25, 0.25, 0.25),
                tau=0.1,
            )
        )
        value, warning = collective_autonomy_index(spec)
        assert value == 0.0
        assert warning


class TestMinCompound:
    def test_clinical(self):
        hac = clinical_hac()
        assert min_compound_autonomy(hac, {"m1", "m2"}) == pytest.approx(0.175, abs=1e-12)

    def test_trading(self):
        hac = trading_hac()
        s = summarize_mixed_cycles(hac.graph, hac.kinds())
        assert min_compound_autonomy(hac, s.m_star) == pytest.approx(0.621, abs=1e-9)

    def test_empty_absent(self):
        assert min_compound_autonomy(clinical_hac(), frozenset()) is None


class TestHorizons:
    @pytest.mark.parametrize("c, expected", [(3, 2 / 3), (2, 0.5), (10, 0.9)])
    def test_structural(self, c, expected):
        assert accountability_horizon(c) == pytest.approx(expected, abs=1e-4)

    def test_small_cycle_rejected(self):
        with pytest.raises(ValidationError):
            accountability_horizon(1)

    @pytest.mark.parametrize(
        "c, tau, expected", [(3, 0.5, 0.5), (3, 0.1, 2 / 3), (2, 0.5, 0.5)]
    )
    def test_combined(self, c, tau, expected):
        assert combined_horizon(c, tau) == pytest.approx(expected, abs=1e-4)

    def test_combined_tau_range(self):
        with pytest.raises(ValidationError):
            combined_horizon(3, 0.0)
        with pytest.raises(ValidationError):
            combined_horizon(3, 1.0)

    def test_relaxed_equals_structural_at_full_allocation(self):
        assert relaxed_horizon(4, 1.0) == accountability_horizon(4)
        assert relaxed_horizon(4, 0.5) == pytest.approx(1 - 0.5 / 4, abs=1e-12)

    @given(
        st.integers(min_value=2, max_value=50),
        st.floats(min_value=0.01, max_value=0.99),
        st.floats(min_value=0.01, max_value=0.99),
    )
    def test_combined_monotone(self, c, tau1, tau2):
        lo, hi = sorted((tau1, tau2))
        assert combined_horizon(c, hi) <= combined_horizon(c, lo) + 1e-12
        assert combined_horizon(c + 1, tau1) >= combined_horizon(c, tau1) - 1e-12


class TestDeficitAndBudget:
    @pytest.mark.parametrize(
        "lam, c, budget, deficit",
        [
            (0.700, 3, 0.900, 0.100),
            (0.621, 3, 1.137, 0.000),
            (1.0, 3, 0.0, 1.0),
            (1.0, 7, 0.0, 1.0),
        ],
    )
    def test_values(self, lam, c, budget, deficit):
        b, d = deficit_and_budget(lam, c)
        assert b == pytest.approx(budget, abs=1e-9)
        assert d == pytest.approx(deficit, abs=1e-9)

    @given(st.floats(min_value=0, max_value=1), st.integers(min_value=2, max_value=12))
    def test_budget_one_iff_zero_deficit(self, lam, c):
        budget, deficit = deficit_and_budget(lam, c)
        assert (budget >= 1.0 - 1e-12) == (deficit <= 1e-12)

    @given(st.integers(min_value=2, max_value=12))
    def test_deficit_shape(self, c):
        horizon = accountability_horizon(c)
        assert deficit_and_budget(horizon, c)[1] == pytest.approx(0.0, abs=1e-12)
        assert deficit_and_budget(1.0, c)[1] == pytest.approx(1.0, abs=1e-12)
        grid = [horizon + i * (1 - horizon) / 20 for i in range(21)]
        values = [deficit_and_budget(x, c)[1] for x in grid]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        below = [deficit_and_budget(x * horizon, c)[1] for x in (0.0, 0.25, 0.5, 0.99)]
        assert all(v == 0.0 for v in below)


class TestClassify:
    def test_clinical_governable(self):
        hac = clinical_hac()
        report = analyze(hac, summarize_mixed_cycles(hac.graph, hac.kinds()))
        assert report.classification == GOVERNABLE
        assert report.lambda_hat == pytest.approx(0.175, abs=1e-12)

    def test_above_horizon_ungovernable(self):
        hac = clinical_hac()
        report = classify(hac, summary(3, {"m1"}), 0.700)
        assert report.classification == UNGOVERNABLE
        assert report.deficit == pytest.approx(0.100, abs=1e-9)

    def test_feedforward(self):
        hac = governance_hac()
        report = analyze(hac, summarize_mixed_cycles(hac.graph, hac.kinds()))
        assert report.classification == NO_MIXED_CYCLE
        assert report.lambda_hat is None
        assert report.deficit == 0.0

    def test_boundary_is_governable(self):
        hac = clinical_hac()
        report = classify(hac, summary(3, {"m1"}), 2 / 3)
        assert report.classification == GOVERNABLE

    def test_margin_band_indeterminate(self):
        hac = replace(clinical_hac(), delta_meas=0.02, delta_model=0.01)
        # combined horizon 2/3; band is [2/3 - 0.04, 2/3 + 0.01]
        assert classify(hac, summary(3, {"m1"}), 0.64).classification == INDETERMINATE
        assert classify(hac, summary(3, {"m1"}), 0.68).classification == UNGOVERNABLE
        assert classify(hac, summary(3, {"m1"}), 0.60).classification == GOVERNABLE
        assert classify(hac, summary(3, {"m1"}), 0.64).margin_used == pytest.approx(0.05)

    def test_tau_binding_classification(self):
        hac = replace(clinical_hac(), tau=0.5)
        # combined horizon is 0.5 < structural 2/3
        report = classify(validate_hac(hac), summary(3, {"m1"}), 0.55)
        assert report.classification == UNGOVERNABLE
        assert report.deficit == 0.0  # structural deficit: below the structural horizon

    def test_missing_lambda_rejected(self):
        with pytest.raises(ValidationError):
            classify(clinical_hac(), summary(3, {"m1"}), None)


class TestWeightInvariance:
    def test_classification_stable_under_100_weights(self):
        hac = clinical_hac()
        s = summarize_mixed_cycles(hac.graph, hac.kinds())
        base = analyze(hac, s)
        rng = np.random.default_rng(77)
        cai_values = set()
        for _ in range(100):
            draws = rng.exponential(1.0, size=4)
            w = WeightVector(*(float(v) for v in draws / draws.sum()))
            variant = validate_hac(replace(hac, weights=w))
            report = analyze(variant, s)
            cai_values.add(round(report.cai, 12))
            assert report.classification == base.classification
            assert report.lambda_hat == base.lambda_hat
        assert len(cai_values) > 50  # the index itself does move


class TestMeasurementInvariance:
    @given(st.floats(min_value=0.0, max_value=0.05), st.randoms())
    @settings(max_examples=30, deadline=None)
    def test_horizon_ignores_profile_perturbation(self, delta, rnd):
        hac = clinical_hac()
        s = summarize_mixed_cycles(hac.graph, hac.kinds())
        base = analyze(hac, s)
        agents = []
        for a in hac.agents:
            if a.kind == HUMAN:
                agents.append(a)
                continue
            p = a.profile
            jitter = lambda v: min(1.0, max(0.0, v + rnd.uniform(-delta, delta)))
            agents.append(
                replace(
                    a,
                    profile=AutonomyProfile(
                        jitter(p.epistemic),
                        jitter(p.executive),
                        jitter(p.evaluative),
                        min(jitter(p.social), 0.999999),
                    ),
                )
            )
        perturbed = validate_hac(replace(hac, agents=tuple(agents)))
        report = analyze(perturbed, s)
        assert report.horizon == base.horizon
        assert report.combined_horizon == base.combined_horizon
