# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from robustht._error import BudgetExhausted, InvariantViolation
from robustht.config import DEFAULT_TARGET_ERROR, DEFAULT_TRIALS, SEARCH_N_MAX, SEARCH_N_START
from robustht.dist import Dist
from robustht.lfd import build_lfds
from robustht.utils.helpers import ci_radius
from robustht.utils.pool import chunk_ranges, run_map
from ._specs import AdversaryModel, AdversarySpec, Strategy, TestSpec
from ._statistics import DECIDE_P, DECIDE_Q, BoundTest, bind_test, censoring_probabilities, h_values
from ._strategies import corruption_budget, greedy_append, greedy_delete, greedy_replace

__all__ = (
    "TrialReport",
    "TrialPlan",
    "trial_generator",
    "run_trials",
    "run_oblivious_trial",
    "run_adaptive_trial",
    "oblivious_sources",
    "empirical_complexity_search"
)

logger = logging.getLogger(__name__)

H_SHIFT_SLACK = 1e-12


class TrialReport:
    """This object shows Monte Carlo error estimates

    Attributes
    ----------
        n: :obj:`int`
            Samples per trial.
        trials: :obj:`int`
            Trials per hypothesis.
        type1: :obj:`float`
            Frequency of deciding ``q`` when data comes from the ``p`` side.
        type2: :obj:`float`
            Frequency of deciding ``p`` when data comes from the ``q`` side.
        ci_radius: :obj:`tuple` of :obj:`float`
            Normal-approximation 95% radii for ``type1`` and ``type2``.
        seed: :obj:`int`
            Master seed.
    """
    __slots__ = (
        "n",
        "trials",
        "type1",
        "type2",
        "ci_radius",
        "seed"
    )

    def __init__(self, n: int, trials: int, type1: float, type2: float, seed: int) -> None:
        self.n = int(n)
        self.trials = int(trials)
        self.type1 = float(type1)
        self.type2 = float(type2)
        self.ci_radius = (ci_radius(self.type1, self.trials), ci_radius(self.type2, self.trials))
        self.seed = int(seed)

    @property
    def total_error(self) -> float:
        return self.type1 + self.type2

    @property
    def total_upper(self) -> float:
        """:obj:`float`: Total error plus both confidence radii"""
        return self.total_error + sum(self.ci_radius)

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "trials": self.trials,
            "type1": self.type1,
            "type2": self.type2,
            "ci_radius": list(self.ci_radius),
            "seed": self.seed
        }

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, TrialReport) and self.to_json() == other.to_json()

    def __repr__(self) -> str:
        return f"TrialReport(n={self.n}, type1={self.type1!r}, type2={self.type2!r})"


def trial_generator(seed: int, trial_index: int, hypothesis: int) -> np.random.Generator:
    """Counter-based generator keyed by (master seed, trial, hypothesis)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(trial_index), int(hypothesis)])))


class TrialPlan:
    """Everything a worker needs to run trials: data sources, adversary and bound test

    Attributes
    ----------
        sources: :obj:`tuple` of :class:`numpy.ndarray`
            Sampling distributions under ``p`` (index 0) and ``q`` (index 1).
        test: :class:`BoundTest`
            The test applied to every dataset.
        adversary: :class:`AdversaryModel`, optional
            Adaptive model applied after sampling.
        eps: :obj:`float`
            Adaptive contamination level.
        retention: :obj:`tuple` of :class:`numpy.ndarray`, optional
            Per-symbol keep probabilities for censored (random-size) sampling.
        h: :class:`numpy.ndarray`, optional
            ``h`` values of the nominal pair, for the replacement shift check.
    """
    __slots__ = (
        "sources",
        "test",
        "adversary",
        "eps",
        "retention",
        "h"
    )

    def __init__(self, sources: Tuple[np.ndarray, np.ndarray], test: BoundTest,
                 adversary: Optional[AdversaryModel] = None, eps: float = 0.0,
                 retention: Optional[Tuple[np.ndarray, np.ndarray]] = None,
                 h: Optional[np.ndarray] = None) -> None:
        self.sources = (np.asarray(sources[0], dtype=float), np.asarray(sources[1], dtype=float))
        self.test = test
        self.adversary = adversary
        self.eps = float(eps)
        self.retention = retention
        self.h = h

    def dataset(self, n: int, hypothesis: int, rng: np.random.Generator) -> np.ndarray:
        """Counts (plus trailing deletions) seen by the test under one hypothesis"""
        budget = corruption_budget(n, self.eps) if self.adversary is not None else 0
        clean = n - budget if self.adversary is AdversaryModel.A_HUB else n
        counts = np.zeros(self.sources[0].size + 1, dtype=np.int64)
        counts[:-1] = rng.multinomial(clean, self.sources[hypothesis])
        if self.retention is not None:
            kept = rng.binomial(counts[:-1], self.retention[hypothesis])
            counts[-1] = clean - int(kept.sum())
            counts[:-1] = kept
        if self.adversary is None or budget == 0:
            return counts

        push = DECIDE_Q if hypothesis == 0 else DECIDE_P
        scores, valid = self.test.scores, self.test.valid_symbols
        if self.adversary is AdversaryModel.A_TV:
            corrupted = greedy_replace(counts, scores, valid, budget, push)
            self._check_shift(counts, corrupted, n)
            return corrupted
        if self.adversary is AdversaryModel.A_HUB:
            return greedy_append(counts, scores, valid, budget, push)
        return greedy_delete(counts, scores, budget, push)

    def _check_shift(self, before: np.ndarray, after: np.ndarray, n: int) -> None:
        if self.h is None:
            return
        h = np.nan_to_num(self.h)
        shift = abs(float(np.dot(after[:-1] - before[:-1], h))) / n
        if shift > 2.0 * self.eps + H_SHIFT_SLACK:
            raise InvariantViolation(f"replacement moved the mean h statistic by {shift!r} > 2*eps")

    def run_one(self, n: int, seed: int, trial_index: int) -> Tuple[int, int]:
        errors = []
        for hypothesis, wrong in ((0, DECIDE_Q), (1, DECIDE_P)):
            rng = trial_generator(seed, trial_index, hypothesis)
            counts = self.dataset(n, hypothesis, rng)
            errors.append(int(self.test.decide(counts, rng) == wrong))
        return errors[0], errors[1]


def _run_chunk(args: Tuple[TrialPlan, int, int, range]) -> List[Tuple[int, int]]:
    plan, n, seed, indices = args
    return [plan.run_one(n, seed, index) for index in indices]


def run_trials(plan: TrialPlan, n: int, trials: int, seed: int, jobs: Optional[int] = 1) -> TrialReport:
    """Run ``trials`` independent trials per hypothesis; the result does not depend on ``jobs``"""
    if trials <= 0:
        raise ValueError("need at least one trial")
    if n < 0:
        raise ValueError("sample size must be nonnegative")
    jobs = 1 if jobs is None else jobs
    chunks = chunk_ranges(trials, max(1, jobs))
    outcomes = run_map(_run_chunk, [(plan, n, seed, chunk) for chunk in chunks], jobs)
    errors_p = sum(e for chunk in outcomes for e, _ in chunk)
    errors_q = sum(e for chunk in outcomes for _, e in chunk)
    return TrialReport(n, trials, errors_p / trials, errors_q / trials, seed)


def run_oblivious_trial(p_true: Dist, q_true: Dist, test: TestSpec, n: int, trials: int, seed: int,
                        nominal: Optional[Tuple[Dist, Dist]] = None, jobs: Optional[int] = 1,
                        retention: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> TrialReport:
    """I.i.d. data from ``p_true``/``q_true`` against ``test`` bound to the nominal pair

    Parameters
    ----------
        p_true, q_true: :class:`Dist`
            Data-generating distributions, typically a least favourable pair.
        test: :class:`TestSpec`
            The test.
        n, trials, seed: :obj:`int`
            Sample size, trials per hypothesis and master seed.
        nominal: :obj:`tuple` of :class:`Dist`, optional
            Pair the test is built on; defaults to ``(p_true, q_true)``.
        jobs: :obj:`int`, optional
            Worker processes.
        retention: :obj:`tuple` of :class:`numpy.ndarray`, optional
            Censor each draw independently (random-size subtractive sampling).
    """
    p_nom, q_nom = nominal if nominal is not None else (p_true, q_true)
    plan = TrialPlan((p_true.probs, q_true.probs), bind_test(test, p_nom, q_nom), retention=retention)
    return run_trials(plan, n, trials, seed, jobs)


def run_adaptive_trial(p: Dist, q: Dist, adversary: AdversarySpec, test: TestSpec, n: int, trials: int,
                       seed: int, jobs: Optional[int] = 1) -> TrialReport:
    """Clean data from ``p``/``q`` corrupted by an adaptive adversary after it is drawn"""
    if not adversary.model.adaptive:
        raise ValueError(f"{adversary.model.value} is not an adaptive model")
    plan = TrialPlan((p.probs, q.probs), bind_test(test, p, q), adversary=adversary.model,
                     eps=adversary.eps, h=h_values(p, q))
    return run_trials(plan, n, trials, seed, jobs)


def oblivious_sources(p: Dist, q: Dist, adversary: AdversarySpec,
                      sub_sampling: str = "fixed") -> Tuple[Dist, Dist, Optional[Tuple[np.ndarray, np.ndarray]]]:
    """Data-generating pair of an oblivious adversary, plus censoring for random-size sampling"""
    if adversary.model.adaptive:
        raise ValueError(f"{adversary.model.value} is adaptive")
    if adversary.eps == 0.0:
        return p, q, None
    if adversary.strategy is Strategy.FIXED_DIST:
        adversary.validate(p, q)
        return adversary.fixed[0], adversary.fixed[1], None
    lfds = build_lfds(p, q, adversary.eps, adversary.model.base)
    if sub_sampling == "censor" and adversary.model is AdversaryModel.SUB:
        return p, q, (censoring_probabilities(lfds, "p"), censoring_probabilities(lfds, "q"))
    return lfds.p_star, lfds.q_star, None


def empirical_complexity_search(p: Dist, q: Dist, adversary: AdversarySpec, test: TestSpec,
                                target_error: float = DEFAULT_TARGET_ERROR, trials: int = DEFAULT_TRIALS,
                                seed: int = 0, n_max: int = SEARCH_N_MAX, jobs: Optional[int] = 1,
                                sub_sampling: str = "fixed") -> int:
    """Smallest ``n`` whose estimated total error is below ``target_error`` minus CI slack

    Doubles from ``n = 1`` until the target is met, clamping at ``n_max``, then
    bisects between the last failing and the first passing size. Three sample
    sizes are compared afterwards as a spot check of monotone error.

    Raises
    ------
        :class:`BudgetExhausted`
            The target is not met at ``n_max``.
    """
    if adversary.model.adaptive:
        def evaluate(n: int) -> TrialReport:
            return run_adaptive_trial(p, q, adversary, test, n, trials, seed, jobs)
    else:
        p_src, q_src, retention = oblivious_sources(p, q, adversary, sub_sampling)

        def evaluate(n: int) -> TrialReport:
            return run_oblivious_trial(p_src, q_src, test, n, trials, seed, nominal=(p, q), jobs=jobs,
                                       retention=retention)

    reports: Dict[int, TrialReport] = {}

    def passes(n: int) -> bool:
        if n not in reports:
            reports[n] = evaluate(n)
            logger.debug(f"search n={n}: {reports[n]!r}")
        return reports[n].total_upper <= target_error

    # lo is the last failing n actually evaluated
    lo, n = SEARCH_N_START - 1, SEARCH_N_START
    while not passes(n):
        if n >= n_max:
            raise BudgetExhausted(f"total error above {target_error} at n_max={n_max}")
        lo, n = n, min(2 * n, n_max)

    hi = n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid

    checkpoints = sorted({max(1, hi // 4), max(1, hi // 2), hi})
    for small, large in zip(checkpoints, checkpoints[1:]):
        passes(small)
        passes(large)
        a, b = reports[small], reports[large]
        if b.total_error > a.total_error + sum(a.ci_radius) + sum(b.ci_radius):
            logger.warning(f"error not monotone between n={small} and n={large}: "
                           f"{a.total_error!r} -> {b.total_error!r}")
    logger.info(f"empirical sample complexity {hi} for {adversary!r}")
    return hi
