# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

from ._families import (
    JumpFamilyInstance,
    jump_pair,
    witness_pair,
    two_point,
    privacy_example_pair,
    dirichlet_corpus,
    random_sub_member
)
from ._jump import JumpTable, jump_experiment
from ._breakdown import BreakdownResult, breakdown_expectation, breakdown_experiment, breakdown_onset_scan
from ._sandwich import (
    SandwichReport,
    approx_hellinger_decomposition,
    decomposition_band,
    monotone_contribution_check,
    clip_ordering_check,
    tv_clip_monotonicity_check,
    sandwich_certify,
    delta0_counterexample
)
from ._nosim import NoSimulationWitness, no_simulation_witnesses, containment_check
from ._privacy_example import PrivacyExample, privacy_experiment

__all__ = (
    "JumpFamilyInstance",
    "jump_pair",
    "witness_pair",
    "two_point",
    "privacy_example_pair",
    "dirichlet_corpus",
    "random_sub_member",
    "JumpTable",
    "jump_experiment",
    "BreakdownResult",
    "breakdown_expectation",
    "breakdown_experiment",
    "breakdown_onset_scan",
    "SandwichReport",
    "approx_hellinger_decomposition",
    "decomposition_band",
    "monotone_contribution_check",
    "clip_ordering_check",
    "tv_clip_monotonicity_check",
    "sandwich_certify",
    "delta0_counterexample",
    "NoSimulationWitness",
    "no_simulation_witnesses",
    "containment_check",
    "PrivacyExample",
    "privacy_experiment"
)
