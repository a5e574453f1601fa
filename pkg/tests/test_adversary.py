import math
from types import SimpleNamespace

import numpy as np
import pytest

from robustht import BudgetExhausted, InvalidSymbol, MembershipError
from robustht.adversary import (
    BOTTOM,
    DECIDE_P,
    DECIDE_Q,
    AdversaryModel,
    AdversarySpec,
    BoundTest,
    Strategy,
    TestKind,
    TestSpec,
    bind_test,
    censoring_probabilities,
    clipped_lr_statistic,
    corruption_budget,
    empirical_complexity_search,
    greedy_append,
    greedy_delete,
    greedy_replace,
    h_means,
    h_statistic,
    oblivious_sources,
    run_adaptive_trial,
    run_oblivious_trial,
    sample_counts,
    scheffe_set,
    scheffe_test,
    score_total,
    stochastic_dominance_check,
    trial_generator
)
from robustht.complexity import exact_sample_complexity, product_tv
from robustht.dist import Dist, Model, hellinger_sq
from robustht.experiments import random_sub_member
from robustht.lfd import build_lfds


class TestSpecs:
    def test_adversary_model(self):
        assert AdversaryModel.parse("A-TV") is AdversaryModel.A_TV
        assert AdversaryModel.A_SUB.adaptive and not AdversaryModel.HUB.adaptive
        assert AdversaryModel.A_HUB.base is Model.HUB
        with pytest.raises(ValueError):
            AdversaryModel.parse("a-foo")

    def test_default_strategies(self):
        assert AdversarySpec("tv", 0.1).strategy is Strategy.LFD_SAMPLER
        assert AdversarySpec("a-sub", 0.1).strategy is Strategy.GREEDY_ADAPTIVE

    def test_strategy_must_fit(self):
        with pytest.raises(ValueError):
            AdversarySpec("tv", 0.1, strategy="greedy-adaptive")
        with pytest.raises(ValueError):
            AdversarySpec("tv", 0.1, strategy="fixed-dist")
        with pytest.raises(ValueError):
            AdversarySpec("hub", 1.0)

    def test_fixed_pair_must_lie_in_sets(self, simple_pair):
        p, q = simple_pair
        spec = AdversarySpec("tv", 0.05, strategy="fixed-dist", fixed=(Dist([0.1, 0.9]), q))
        with pytest.raises(MembershipError):
            spec.validate(p, q)
        AdversarySpec("tv", 0.05, strategy="fixed-dist", fixed=(Dist([0.57, 0.43]), q)).validate(p, q)

    def test_test_spec(self):
        with pytest.raises(ValueError):
            TestSpec(TestKind.SCHEFFE, calibration=("tv", 0.1))
        with pytest.raises(ValueError):
            TestSpec(TestKind.CLIPPED_LR, tie_randomization=1.5)
        spec = TestSpec("clipped-lr", calibration=("SUB", 0.1))
        assert spec.to_json()["calibration"] == ["sub", 0.1]


class TestStatistics:
    def test_sample_counts(self):
        counts = sample_counts([0, 2, BOTTOM, None, 2], 3)
        assert counts.tolist() == [1, 0, 2, 2]
        with pytest.raises(InvalidSymbol):
            sample_counts([3], 3)

    def test_opposite_infinities_tie(self):
        scores = np.array([math.inf, -math.inf, 1.0, 0.0])
        assert score_total(np.array([1, 1, 4, 0]), scores) == 0.0
        assert score_total(np.array([1, 0, 4, 0]), scores) == math.inf
        assert score_total(np.array([0, 0, 4, 2]), scores) == 4.0

    def test_nan_symbol_rejected(self):
        with pytest.raises(InvalidSymbol):
            score_total(np.array([1, 0]), np.array([np.nan, 0.0]))

    def test_single_jump_symbol_decides_p(self, jump):
        p, q = jump(0.01)
        lfds = build_lfds(p, q, 2 * 0.01 / (1 - 2 * 0.01), Model.SUB)
        assert clipped_lr_statistic([0, 1, 1, 0, 2], lfds) == math.inf
        bound = bind_test(TestSpec("clipped-lr", calibration=(Model.SUB, lfds.eps)), p, q)
        assert bound.decide(sample_counts([0, 0, 0, 2], 3)) == DECIDE_P

    def test_h_identity(self, corpus):
        for p, q, _ in corpus[:100]:
            mu_p, mu_q = h_means(p, q)
            assert mu_p - mu_q == pytest.approx(hellinger_sq(p, q), abs=1e-12)

    def test_h_statistic(self, simple_pair):
        p, q = simple_pair
        value = h_statistic([0, 0, 1, BOTTOM], p, q)
        h0 = (math.sqrt(0.6) - math.sqrt(0.4)) / (math.sqrt(0.6) + math.sqrt(0.4))
        assert value == pytest.approx(h0 / 3)
        with pytest.raises(ValueError):
            h_statistic([BOTTOM], p, q)

    def test_scheffe(self, simple_pair):
        p, q = simple_pair
        assert scheffe_set(p, q).tolist() == [True, False]
        assert scheffe_test([0, 0, 0, 1], p, q) == DECIDE_P
        assert scheffe_test([1, 1, 1, 0], p, q) == DECIDE_Q

    def test_scheffe_ignores_deleted_samples(self, simple_pair):
        p, q = simple_pair
        assert scheffe_test([0, 0, 1, BOTTOM, BOTTOM, BOTTOM], p, q) == DECIDE_P
        assert scheffe_test([0, 1, 1, BOTTOM], p, q) == DECIDE_Q
        with pytest.raises(ValueError):
            scheffe_test([BOTTOM, BOTTOM], p, q)

    def test_scheffe_error_at_sufficient_n(self, simple_pair):
        p, q = simple_pair
        tv = 0.2
        n = math.ceil(8 * math.log(20) / tv ** 2)
        rng = np.random.default_rng(2024)
        wrong_p = sum(scheffe_test(rng.choice(2, size=n, p=p.probs), p, q) != DECIDE_P for _ in range(200))
        wrong_q = sum(scheffe_test(rng.choice(2, size=n, p=q.probs), p, q) != DECIDE_Q for _ in range(200))
        assert wrong_p / 200 <= 0.05 and wrong_q / 200 <= 0.05

    def test_tie_randomization(self):
        counts = np.array([2, 0])
        assert BoundTest(np.array([0.0, 0.0]), 1.0).decide(counts) == DECIDE_P
        assert BoundTest(np.array([0.0, 0.0]), 0.0).decide(counts) == DECIDE_Q
        rng = np.random.default_rng(0)
        decisions = [BoundTest(np.array([0.0, 0.0]), 0.5).decide(counts, rng) for _ in range(400)]
        assert 120 < sum(decisions) < 280

    def test_censoring_realizes_sub_lfd(self, simple_pair):
        lfds = build_lfds(*simple_pair, 0.05, Model.SUB)
        for side, base, star in (("p", lfds.p, lfds.p_star), ("q", lfds.q, lfds.q_star)):
            keep = censoring_probabilities(lfds, side)
            assert np.all((0.0 <= keep) & (keep <= 1.0))
            kept = base.probs * keep
            np.testing.assert_allclose(kept / kept.sum(), star.probs, atol=1e-12)

    def test_stochastic_dominance(self, rng):
        p, q = Dist([0.3, 0.25, 0.45]), Dist([0.5, 0.3, 0.2])
        lfds = build_lfds(p, q, 0.04, Model.SUB)
        for _ in range(20):
            assert stochastic_dominance_check(lfds, random_sub_member(p, 0.04, rng), side="p")
            assert stochastic_dominance_check(lfds, random_sub_member(q, 0.04, rng), side="q")


class TestStrategies:
    scores = np.array([2.0, -1.0, 0.5, 0.0])
    valid = np.array([0, 1, 2])

    def test_budget(self):
        assert corruption_budget(100, 0.07) == 7
        assert corruption_budget(10, 0.05) == 0

    def test_replace(self):
        out = greedy_replace(np.array([5, 0, 3, 0]), self.scores, self.valid, 6, DECIDE_Q)
        assert out.tolist() == [0, 6, 2, 0]

    def test_replace_stops_when_nothing_helps(self):
        out = greedy_replace(np.array([0, 4, 0, 0]), self.scores, self.valid, 3, DECIDE_Q)
        assert out.tolist() == [0, 4, 0, 0]

    def test_append(self):
        assert greedy_append(np.array([1, 1, 1, 0]), self.scores, self.valid, 2, DECIDE_P).tolist() == [3, 1, 1, 0]

    def test_delete(self):
        assert greedy_delete(np.array([5, 0, 3, 0]), self.scores, 6, DECIDE_Q).tolist() == [0, 0, 2, 6]
        assert greedy_delete(np.array([5, 2, 3, 0]), self.scores, 6, DECIDE_P).tolist() == [5, 0, 3, 2]


class TestTrials:
    def test_generators_are_keyed(self):
        a = trial_generator(1, 2, 0).random(3)
        assert np.array_equal(a, trial_generator(1, 2, 0).random(3))
        assert not np.array_equal(a, trial_generator(1, 2, 1).random(3))

    def test_oblivious_identity(self, simple_pair):
        lfds = build_lfds(*simple_pair, 0.02, Model.TV)
        n = 20
        report = run_oblivious_trial(lfds.p_star, lfds.q_star, TestSpec("clipped-lr"), n, 4000, seed=3)
        expected = 1.0 - product_tv(lfds.p_star, lfds.q_star, n)
        assert abs(report.total_error - expected) <= 2.0 * sum(report.ci_radius)

    def test_workers_do_not_change_result(self, simple_pair):
        test = TestSpec("clipped-lr", calibration=("hub", 0.03))
        single = run_oblivious_trial(*simple_pair, test, 30, 300, seed=9, jobs=1)
        assert run_oblivious_trial(*simple_pair, test, 30, 300, seed=9, jobs=3) == single

    @pytest.mark.parametrize("model", ["a-tv", "a-hub", "a-sub"])
    def test_adaptive_jump_family(self, jump, model):
        eps = 0.05
        p, q = jump(eps)
        base = AdversaryModel(model).base
        lfds = build_lfds(p, q, 2 * eps, base)
        n = math.ceil(40 / hellinger_sq(lfds.p_star, lfds.q_star))
        test = TestSpec("clipped-lr", calibration=(base, 2 * eps))
        report = run_adaptive_trial(p, q, AdversarySpec(model, eps), test, n, 2000, seed=1)
        assert report.total_error - sum(report.ci_radius) <= 0.2

    def test_h_statistic_under_replacement(self, simple_pair):
        p, q = simple_pair
        hel = hellinger_sq(p, q)
        n = math.ceil(320 / hel)
        report = run_adaptive_trial(p, q, AdversarySpec("a-tv", hel / 8), TestSpec("h-stat"), n, 2000, seed=2)
        assert report.type1 <= 0.1 and report.type2 <= 0.1

    def test_adaptive_needs_adaptive_model(self, simple_pair):
        with pytest.raises(ValueError):
            run_adaptive_trial(*simple_pair, AdversarySpec("tv", 0.01), TestSpec("h-stat"), 10, 10, seed=0)

    def test_sources(self, simple_pair):
        p, q = simple_pair
        assert oblivious_sources(p, q, AdversarySpec("tv", 0.0))[:2] == (p, q)
        p_src, q_src, retention = oblivious_sources(p, q, AdversarySpec("sub", 0.05), sub_sampling="censor")
        assert (p_src, q_src) == (p, q) and len(retention) == 2
        p_src, _, retention = oblivious_sources(p, q, AdversarySpec("hub", 0.05))
        assert retention is None and p_src == build_lfds(p, q, 0.05, Model.HUB).p_star

    def test_censored_sampling_runs(self, simple_pair):
        p, q = simple_pair
        _, _, retention = oblivious_sources(p, q, AdversarySpec("sub", 0.05), sub_sampling="censor")
        test = TestSpec("clipped-lr", calibration=("sub", 0.05))
        report = run_oblivious_trial(p, q, test, 200, 500, seed=4, retention=retention)
        assert report.total_error <= 0.5

    def test_search(self, simple_pair):
        adversary = AdversarySpec("tv", 0.0)
        first = empirical_complexity_search(*simple_pair, adversary, TestSpec("clipped-lr"), trials=400, seed=5)
        again = empirical_complexity_search(*simple_pair, adversary, TestSpec("clipped-lr"), trials=400, seed=5)
        assert first == again
        assert 10 <= first <= 400

    def test_search_budget(self, simple_pair):
        with pytest.raises(BudgetExhausted):
            empirical_complexity_search(*simple_pair, AdversarySpec("tv", 0.0), TestSpec("clipped-lr"),
                                        trials=200, seed=5, n_max=4)

    def test_search_bisects_from_last_failure(self, simple_pair, monkeypatch):
        evaluated = []

        def fake_trial(p, q, test, n, *args, **kwargs):
            evaluated.append(n)
            error = 0.0 if n >= 70 else 1.0
            return SimpleNamespace(total_upper=error, total_error=error, ci_radius=(0.0, 0.0))

        monkeypatch.setattr("robustht.adversary._trials.run_oblivious_trial", fake_trial)
        found = empirical_complexity_search(*simple_pair, AdversarySpec("tv", 0.01), TestSpec("clipped-lr"),
                                            n_max=100)
        assert found == 70
        assert 64 in evaluated and 100 in evaluated
        assert not [n for n in evaluated if 50 <= n < 64]

    def test_search_tracks_exact_complexity(self, simple_pair):
        exact = exact_sample_complexity(*simple_pair)
        found = empirical_complexity_search(*simple_pair, AdversarySpec("tv", 0.0), TestSpec("clipped-lr"),
                                            trials=2000, seed=5)
        assert 0.75 * exact <= found <= 2 * exact
