import math

import numpy as np
import pytest

from robustht import ConditionNotMet
from robustht.dist import Dist, Model, hellinger_sq, set_membership, tv_distance
from robustht.experiments import (
    JumpFamilyInstance,
    approx_hellinger_decomposition,
    breakdown_expectation,
    breakdown_experiment,
    breakdown_onset_scan,
    clip_ordering_check,
    containment_check,
    decomposition_band,
    delta0_counterexample,
    dirichlet_corpus,
    jump_experiment,
    monotone_contribution_check,
    no_simulation_witnesses,
    random_sub_member,
    sandwich_certify,
    tv_clip_monotonicity_check,
    witness_pair
)
from robustht.lfd import build_lfds

BREAKDOWN_CASES = [(Model.TV, 1e-7, 0.2), (Model.HUB, 1e-8, 0.3), (Model.SUB, 1e-6, 0.5)]


class TestFamilies:
    def test_jump_levels(self):
        tv = JumpFamilyInstance(0.01, 0.25, "tv")
        assert tv.eps2 == 0.01 and tv.eps1 == pytest.approx(0.01 - 0.01 ** 1.25)
        hub = JumpFamilyInstance(0.01, 0.25, "hub")
        assert hub.eps2 == pytest.approx(0.02 / 1.02)
        sub = JumpFamilyInstance(0.01, 0.5, "sub")
        assert sub.eps2 == pytest.approx(0.02 / 0.98)

    def test_jump_limits(self):
        with pytest.raises(ValueError):
            JumpFamilyInstance(0.01, 0.6, "tv")
        with pytest.raises(ValueError):
            JumpFamilyInstance(0.06, 0.25, "tv")

    @pytest.mark.parametrize("model", list(Model))
    def test_witness_in_critical_sets(self, model):
        instance = JumpFamilyInstance(0.005, 0.25, model)
        p_w, q_w = witness_pair(0.005, model)
        assert set_membership(p_w, instance.p, instance.eps2, model)
        assert set_membership(q_w, instance.q, instance.eps2, model)

    def test_corpus_is_seeded(self):
        a, b = dirichlet_corpus(5, seed=3), dirichlet_corpus(5, seed=3)
        for (p1, q1, e1), (p2, q2, e2) in zip(a, b):
            assert p1 == p2 and q1 == q2 and e1 == e2
            assert 0 < e1 <= tv_distance(p1, q1) / 4

    def test_random_sub_member(self, rng):
        p = Dist([0.2, 0.5, 0.3])
        for _ in range(10):
            assert set_membership(random_sub_member(p, 0.1, rng), p, 0.1, Model.SUB)


class TestJump:
    @pytest.mark.parametrize("model,t", [(Model.TV, 0.25), (Model.HUB, 0.25), (Model.SUB, 0.5)])
    def test_slopes(self, model, t):
        table = jump_experiment(t=t, model=model)
        assert table.fits_ok
        assert table.slopes["eps2"][0] == pytest.approx(2.0, abs=0.1)
        assert table.slopes["symbol3"][0] == pytest.approx(table.expected_symbol3_slope, abs=0.1)
        assert table.expected_symbol3_slope - 0.1 <= table.slopes["eps1"][0] <= 2.1

    def test_perturbation_is_harder(self):
        table = jump_experiment(t=0.25, model=Model.TV)
        for row in table.rows:
            assert row["predicted_n_eps1"] < row["predicted_n_eps2"]
        assert len(table.csv_rows()) == 5 and len(table.csv_rows()[0]) == len(table.columns)


class TestBreakdown:
    def test_sign_fails_at_large_eps(self):
        with pytest.raises(ConditionNotMet):
            breakdown_experiment(0.02, 0.2, Model.TV, trials=10)

    @pytest.mark.parametrize("model,eps,t", BREAKDOWN_CASES)
    def test_exact_sign(self, model, eps, t):
        exact = breakdown_expectation(JumpFamilyInstance(eps, t, model))
        assert exact["sign_ok"]
        assert exact["side"] == ("p" if model is Model.SUB else "q")
        assert math.isfinite(exact["mean"]) and exact["sd"] > 0

    @pytest.mark.parametrize("model,eps,t", BREAKDOWN_CASES)
    def test_error_breaks_down(self, model, eps, t):
        result = breakdown_experiment(eps, t, model, trials=500, seed=11)
        assert result.final_error >= 0.9
        ns = [n for n, _ in result.error_curve]
        assert ns == sorted(ns) and len(ns) == 5
        assert result.to_json()["side"] == result.side
        assert 0.0 <= result.overestimation_error <= 1.0
        assert result.overestimation.n == ns[-1]

    @pytest.mark.parametrize("model,t", [(Model.TV, 0.4), (Model.TV, 1 / 3), (Model.HUB, 0.5), (Model.SUB, 0.0)])
    def test_exponent_outside_breakdown_range(self, model, t):
        with pytest.raises(ValueError):
            breakdown_experiment(1e-7, t, model, trials=10)
        with pytest.raises(ValueError):
            breakdown_onset_scan(t, model)

    def test_tv_exponent_between_breakdown_and_jump_limits(self):
        instance = JumpFamilyInstance(1e-7, 0.4, Model.TV)
        with pytest.raises(ValueError):
            breakdown_expectation(instance)

    def test_onset_scan(self):
        scan = breakdown_onset_scan(0.2, Model.TV)
        assert scan["onset"] is not None and scan["onset"] < 0.02
        assert scan["rows"][0]["sign_ok"] is False


class TestSandwich:
    def test_corpus_certifies(self, corpus):
        reports = sandwich_certify(corpus)
        failed = [report.to_json() for report in reports if not report.passed]
        assert failed == []

    def test_clip_monotonicity(self, small_corpus, rng):
        assert sum(tv_clip_monotonicity_check(p, q, rng) for p, q, _ in small_corpus) == 0

    def test_clip_ordering(self, small_corpus):
        assert all(clip_ordering_check(p, q, eps) for p, q, eps in small_corpus)

    def test_decomposition_edges(self):
        p = Dist([0.3, 0.7])
        assert approx_hellinger_decomposition(p, p) == (0.0, 0.0, 0.0, 0.0)
        assert approx_hellinger_decomposition(Dist([1.0, 0.0]), Dist([0.0, 1.0])) == (1.0, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            approx_hellinger_decomposition(p, p, delta0=0.0)

    def test_decomposition_band(self, small_corpus):
        lo, hi = decomposition_band(1.0)
        assert lo == 1.0 and hi == pytest.approx(1.0 / (1.0 - 1.0 / math.sqrt(2.0)) ** 2)
        for p, q, _ in small_corpus:
            h_a, h_b, t_a, t_b = approx_hellinger_decomposition(p, q)
            assert h_a + h_b == pytest.approx(hellinger_sq(p, q))
            assert h_a <= t_a * (1 + 1e-9) + 1e-15 and t_a <= hi * h_a * (1 + 1e-9) + 1e-15
            assert h_b <= t_b * (1 + 1e-9) + 1e-15 and t_b <= hi * h_b * (1 + 1e-9) + 1e-15

    def test_monotone_contributions_order(self, simple_pair):
        assert monotone_contribution_check(*simple_pair, 0.01, 0.04)
        with pytest.raises(ValueError):
            monotone_contribution_check(*simple_pair, 0.04, 0.01)

    def test_delta0_remark(self):
        rows = delta0_counterexample()
        ratios = [row["ratio"] for row in rows]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] / ratios[0] >= 5.0

    def test_vanishing_contamination(self, small_corpus):
        for p, q, _ in small_corpus[:100]:
            if tv_distance(p, q) < 0.1:
                continue
            nominal = hellinger_sq(p, q)
            for model in Model:
                lfds = build_lfds(p, q, 1e-10, model)
                assert hellinger_sq(lfds.p_star, lfds.q_star) == pytest.approx(nominal, rel=0.01)


class TestNoSimulation:
    def test_witnesses(self):
        witnesses = no_simulation_witnesses()
        assert len(witnesses) == 24
        assert [w.part for w in witnesses if not w.ok] == []

    def test_factor_range(self):
        with pytest.raises(ValueError):
            no_simulation_witnesses(factors=(2e4,), eps=1e-4)

    def test_containment(self, small_corpus):
        assert containment_check(small_corpus, seed=1) == {"hub": 0, "sub": 0, "checked": len(small_corpus)}


def test_hellinger_ordering_on_random_pair():
    rng = np.random.default_rng(2)
    p = Dist(rng.dirichlet(np.ones(5)), normalize=True)
    q = Dist(rng.dirichlet(np.ones(5)), normalize=True)
    eps = min(0.02, tv_distance(p, q) / 4)
    hel = {}
    for model in Model:
        lfds = build_lfds(p, q, eps, model)
        hel[model] = hellinger_sq(lfds.p_star, lfds.q_star)
    assert hel[Model.TV] <= hel[Model.HUB] * (1 + 1e-9)
    assert hel[Model.TV] <= hel[Model.SUB] * (1 + 1e-9)
