# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import gammaln, xlogy

from robustht._error import AlphabetMismatch, InvariantViolation, StateSpaceExceeded
from robustht.config import DEFAULT_TARGET_ERROR, MAX_ENUMERATION_STATES
from robustht.dist import Dist, tv_distance
from robustht.utils.pool import run_map

__all__ = (
    "compositions",
    "state_count",
    "product_tv",
    "product_tv_curve",
    "exact_sample_complexity"
)

logger = logging.getLogger(__name__)

MONOTONE_SLACK = 1e-12


@lru_cache(maxsize=512)
def compositions(n: int, k: int) -> np.ndarray:
    """All count vectors of length ``k`` summing to ``n``, ordered by leading count"""
    if k == 1:
        out = np.array([[n]], dtype=np.int64)
    elif k == 2:
        c = np.arange(n + 1, dtype=np.int64)
        out = np.column_stack((c, n - c))
    else:
        blocks = []
        for lead in range(n + 1):
            rest = compositions(n - lead, k - 1)
            blocks.append(np.column_stack((np.full(rest.shape[0], lead, dtype=np.int64), rest)))
        out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def state_count(n: int, k: int) -> int:
    """Number of count vectors of length ``k`` summing to ``n``"""
    return math.comb(n + k - 1, k - 1)


def _abs_differences(counts: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    n = int(counts[0].sum()) if counts.size else 0
    log_coef = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    log_a = log_coef + xlogy(counts, p).sum(axis=1)
    log_b = log_coef + xlogy(counts, q).sum(axis=1)
    top = np.maximum(log_a, log_b)
    out = np.zeros(counts.shape[0])
    live = np.isfinite(top)
    gap = np.abs(log_a[live] - log_b[live])
    # |e^a - e^b| = e^max * (1 - e^-|a-b|)
    out[live] = np.exp(top[live]) * -np.expm1(-gap)
    return out


def _block_terms(args: Tuple[np.ndarray, np.ndarray, int, int]) -> np.ndarray:
    p, q, n, lead = args
    rest = compositions(n - lead, p.size - 1)
    counts = np.column_stack((np.full(rest.shape[0], lead, dtype=np.int64), rest))
    return _abs_differences(counts, p, q)


def product_tv(p: Dist, q: Dist, n: int, jobs: Optional[int] = 1) -> float:
    """Exact ``tv(p^n, q^n)`` by summing over all count vectors.

    The sum is correctly rounded, so splitting the enumeration over workers by
    leading count does not change the result.
    """
    if p.alphabet_size != q.alphabet_size:
        raise AlphabetMismatch(f"alphabet sizes differ: {p.alphabet_size} != {q.alphabet_size}")
    if n == 0:
        return 0.0
    pa, qa = p.probs, q.probs
    if pa.size == 1:
        return 0.0
    if jobs is not None and jobs > 1:
        blocks = run_map(_block_terms, [(pa, qa, n, lead) for lead in range(n + 1)], jobs)
        terms = np.concatenate(blocks)
    else:
        terms = _abs_differences(compositions(n, pa.size), pa, qa)
    return 0.5 * math.fsum(terms.tolist())


def _guard(n_max: int, k: int) -> None:
    states = state_count(n_max, k)
    if states > MAX_ENUMERATION_STATES:
        raise StateSpaceExceeded(f"{states} count vectors at n={n_max}, k={k} exceeds {MAX_ENUMERATION_STATES}")


def product_tv_curve(p: Dist, q: Dist, n_max: int, jobs: Optional[int] = 1) -> List[float]:
    """``[tv(p^n, q^n) for n in 1..n_max]``, checked to be nondecreasing"""
    _guard(n_max, p.alphabet_size)
    curve: List[float] = []
    for n in range(1, n_max + 1):
        value = product_tv(p, q, n, jobs=jobs)
        if curve and value < curve[-1] - MONOTONE_SLACK:
            raise InvariantViolation(f"tv of product measures decreased at n={n}: {curve[-1]!r} -> {value!r}")
        curve.append(value)
    return curve


def exact_sample_complexity(p: Dist, q: Dist, target_error: float = DEFAULT_TARGET_ERROR, n_max: int = 200,
                            jobs: Optional[int] = 1) -> Optional[int]:
    """Smallest ``n <= n_max`` with ``tv(p^n, q^n) >= 1 - target_error``

    Parameters
    ----------
        p, q: :class:`Dist`
            The simple pair.
        target_error: :obj:`float`, optional
            Allowed type-I plus type-II error of the optimal test.
        n_max: :obj:`int`, optional
            Largest sample size enumerated.
        jobs: :obj:`int`, optional
            Worker processes per enumeration.

    Returns
    -------
        :obj:`int` or ``None``
            ``None`` when no ``n <= n_max`` reaches the threshold.

    Raises
    ------
        :class:`StateSpaceExceeded`
            ``C(n_max + k - 1, k - 1)`` is above the enumeration guard.
    """
    _guard(n_max, p.alphabet_size)
    if tv_distance(p, q) == 0.0:
        return None
    previous = 0.0
    for n in range(1, n_max + 1):
        value = product_tv(p, q, n, jobs=jobs)
        if value < previous - MONOTONE_SLACK:
            raise InvariantViolation(f"tv of product measures decreased at n={n}: {previous!r} -> {value!r}")
        if value >= 1.0 - target_error:
            logger.debug(f"exact sample complexity {n} (tv={value!r})")
            return n
        previous = value
    return None
