# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

from ._specs import AdversaryModel, Strategy, TestKind, AdversarySpec, TestSpec
from ._statistics import (
    BOTTOM,
    DECIDE_P,
    DECIDE_Q,
    sample_counts,
    score_total,
    clipped_lr_statistic,
    h_values,
    h_means,
    h_statistic,
    scheffe_set,
    scheffe_test,
    BoundTest,
    bind_test,
    censoring_probabilities,
    stochastic_dominance_check
)
from ._strategies import corruption_budget, greedy_replace, greedy_append, greedy_delete
from ._trials import (
    TrialReport,
    TrialPlan,
    trial_generator,
    run_trials,
    run_oblivious_trial,
    run_adaptive_trial,
    oblivious_sources,
    empirical_complexity_search
)

__all__ = (
    "AdversaryModel",
    "Strategy",
    "TestKind",
    "AdversarySpec",
    "TestSpec",
    "BOTTOM",
    "DECIDE_P",
    "DECIDE_Q",
    "sample_counts",
    "score_total",
    "clipped_lr_statistic",
    "h_values",
    "h_means",
    "h_statistic",
    "scheffe_set",
    "scheffe_test",
    "BoundTest",
    "bind_test",
    "censoring_probabilities",
    "stochastic_dominance_check",
    "corruption_budget",
    "greedy_replace",
    "greedy_append",
    "greedy_delete",
    "TrialReport",
    "TrialPlan",
    "trial_generator",
    "run_trials",
    "run_oblivious_trial",
    "run_adaptive_trial",
    "oblivious_sources",
    "empirical_complexity_search"
)
