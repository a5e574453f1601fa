# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import math
from typing import Iterable, Optional, Union

import numpy as np

from robustht._error import InvalidSymbol
from robustht.dist import Dist, likelihood_ratios
from robustht.lfd import LfdPair, build_lfds, clipped_log_ratios
from ._specs import TestKind, TestSpec

__all__ = (
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
    "stochastic_dominance_check"
)

BOTTOM = -1  # deleted sample
DECIDE_P = 1
DECIDE_Q = 0

Symbol = Optional[int]


def sample_counts(sample: Iterable[Symbol], alphabet_size: int) -> np.ndarray:
    """Count vector of length ``alphabet_size + 1``; the last slot counts deleted samples"""
    counts = np.zeros(alphabet_size + 1, dtype=np.int64)
    for symbol in sample:
        if symbol is None or symbol == BOTTOM:
            counts[-1] += 1
        elif 0 <= int(symbol) < alphabet_size:
            counts[int(symbol)] += 1
        else:
            raise InvalidSymbol(f"symbol {symbol!r} is outside the alphabet of size {alphabet_size}")
    return counts


def score_total(counts: np.ndarray, scores: np.ndarray) -> float:
    """``sum counts * scores`` over observed symbols, with infinite scores dominating.

    Opposite infinities cancel to 0, a tie.
    """
    seen = counts > 0
    values = scores[seen]
    if np.any(np.isnan(values)):
        raise InvalidSymbol("sample contains a symbol outside both supports")
    plus = bool(np.any(values == math.inf))
    minus = bool(np.any(values == -math.inf))
    if plus and minus:
        return 0.0
    if plus:
        return math.inf
    if minus:
        return -math.inf
    return float(np.dot(counts[seen], values))


def _with_bottom(scores: np.ndarray) -> np.ndarray:
    return np.concatenate((scores, [0.0]))


def clipped_lr_statistic(sample: Iterable[Symbol], lfds: LfdPair) -> float:
    """Sum of per-sample clipped log-likelihood ratios; deleted samples add 0"""
    scores = _with_bottom(clipped_log_ratios(lfds))
    return score_total(sample_counts(sample, lfds.p.alphabet_size), scores)


def h_values(p: Dist, q: Dist) -> np.ndarray:
    """``h(i) = (sqrt p - sqrt q) / (sqrt p + sqrt q)``; ``nan`` where both vanish"""
    sp, sq = np.sqrt(p.probs), np.sqrt(q.probs)
    total = sp + sq
    out = np.full(total.size, np.nan)
    live = total > 0
    out[live] = (sp[live] - sq[live]) / total[live]
    return out


def h_means(p: Dist, q: Dist):
    """``(mu_p, mu_q)``, the means of ``h`` under ``p`` and ``q``; they differ by ``hel^2``"""
    h = np.nan_to_num(h_values(p, q))
    return float(np.dot(p.probs, h)), float(np.dot(q.probs, h))


def h_statistic(sample: Iterable[Symbol], p: Dist, q: Dist) -> float:
    """Mean of ``h`` over the non-deleted samples"""
    counts = sample_counts(sample, p.alphabet_size)[:-1]
    h = h_values(p, q)
    if counts.sum() == 0:
        raise ValueError("h statistic needs at least one sample")
    if np.any(np.isnan(h[counts > 0])):
        raise InvalidSymbol("sample contains a symbol outside both supports")
    seen = counts > 0
    return float(np.dot(counts[seen], h[seen]) / counts.sum())


def scheffe_set(p: Dist, q: Dist) -> np.ndarray:
    """Indicator of ``A = {i : p(i) >= q(i)}``"""
    return p.probs >= q.probs


def scheffe_test(sample: Iterable[Symbol], p: Dist, q: Dist) -> int:
    """Decide ``p`` (1) iff the frequency of ``A`` reaches ``(p(A) + q(A)) / 2``, else ``q`` (0)

    The frequency is taken over the non-deleted samples.
    """
    counts = sample_counts(sample, p.alphabet_size)[:-1]
    in_a = scheffe_set(p, q)
    n = int(counts.sum())
    if n == 0:
        raise ValueError("Scheffe test needs at least one sample")
    frequency = float(counts[in_a].sum()) / n
    threshold = 0.5 * (float(p.probs[in_a].sum()) + float(q.probs[in_a].sum()))
    return DECIDE_P if frequency >= threshold else DECIDE_Q


class BoundTest:
    """A test reduced to per-symbol scores: decide ``p`` iff ``counts . scores > threshold``

    Attributes
    ----------
        scores: :class:`numpy.ndarray`
            One score per symbol plus a trailing 0 for deleted samples.
        tie_randomization: :obj:`float`
            Probability of deciding ``p`` on an exact tie.
        threshold: :obj:`float`
            Threshold on the summed score; mean-type tests fold theirs into the scores.
        lfds: :class:`LfdPair`, optional
            Least favourable pair behind a clipped likelihood-ratio test.
    """
    __slots__ = (
        "scores",
        "tie_randomization",
        "threshold",
        "lfds"
    )

    def __init__(self, scores: np.ndarray, tie_randomization: float, threshold: float = 0.0,
                 lfds: Optional[LfdPair] = None) -> None:
        self.scores = np.asarray(scores, dtype=float)
        self.tie_randomization = float(tie_randomization)
        self.threshold = float(threshold)
        self.lfds = lfds

    @property
    def valid_symbols(self) -> np.ndarray:
        return np.flatnonzero(~np.isnan(self.scores[:-1]))

    def statistic(self, counts: np.ndarray) -> float:
        return score_total(counts, self.scores)

    def decide(self, counts: np.ndarray, rng: Optional[np.random.Generator] = None) -> int:
        value = self.statistic(counts)
        if value > self.threshold:
            return DECIDE_P
        if value < self.threshold:
            return DECIDE_Q
        if self.tie_randomization >= 1.0:
            return DECIDE_P
        if self.tie_randomization <= 0.0 or rng is None:
            return DECIDE_Q
        return DECIDE_P if rng.random() < self.tie_randomization else DECIDE_Q


def bind_test(test: TestSpec, p: Dist, q: Dist) -> BoundTest:
    """Reduce ``test`` on the nominal pair ``(p, q)`` to per-symbol scores"""
    lfds = None
    threshold = 0.0
    if test.kind is TestKind.CLIPPED_LR:
        if test.calibration is None:
            with np.errstate(divide="ignore"):
                scores = np.log(likelihood_ratios(p, q))
        else:
            model, eps = test.calibration
            lfds = build_lfds(p, q, eps, model)
            scores = clipped_log_ratios(lfds)
        threshold = 0.0 if test.threshold is None else float(test.threshold)
    elif test.kind is TestKind.H_STAT:
        h = h_values(p, q)
        mu_p, mu_q = h_means(p, q)
        tau = 0.5 * (mu_p + mu_q) if test.threshold is None else float(test.threshold)
        scores = h - tau
    else:
        in_a = scheffe_set(p, q)
        midpoint = 0.5 * (float(p.probs[in_a].sum()) + float(q.probs[in_a].sum()))
        tau = midpoint if test.threshold is None else float(test.threshold)
        scores = np.where(in_a, 1.0, 0.0) - tau
        scores[(p.probs == 0) & (q.probs == 0)] = np.nan
    return BoundTest(_with_bottom(scores), test.tie_randomization, threshold=threshold, lfds=lfds)


def censoring_probabilities(lfds: LfdPair, side: str = "p") -> np.ndarray:
    """Retention probabilities realizing a subtractive LFD by rejecting nominal samples.

    Keeping a draw of symbol ``i`` from ``p`` with probability
    ``p_star(i) / ((1 + eps) p(i))`` and conditioning on acceptance yields ``p_star``.
    """
    if side == "p":
        star, base, eps = lfds.p_star.probs, lfds.p.probs, lfds.eps
    else:
        star, base, eps = lfds.q_star.probs, lfds.q.probs, lfds.eps_q
    out = np.zeros(base.size)
    live = base > 0
    out[live] = np.clip(star[live] / ((1.0 + eps) * base[live]), 0.0, 1.0)
    return out


def stochastic_dominance_check(lfds: LfdPair, candidate: Dist, side: str = "p", tol: float = 1e-12) -> bool:
    """Exact check that the clipped score is stochastically smallest under ``p_star``
    (``side="p"``) or largest under ``q_star`` (``side="q"``) against ``candidate``"""
    scores = clipped_log_ratios(lfds)
    star = lfds.p_star.probs if side == "p" else lfds.q_star.probs
    cand = candidate.probs
    if np.any(np.isnan(scores) & (cand > 0)):
        return False
    levels = np.unique(scores[~np.isnan(scores)])
    for level in levels:
        below = scores <= level
        star_cdf = float(star[below].sum())
        cand_cdf = float(cand[below].sum())
        if side == "p" and star_cdf < cand_cdf - tol:
            return False
        if side == "q" and star_cdf > cand_cdf + tol:
            return False
    return True
