# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import math

import numpy as np

from ._statistics import DECIDE_P

__all__ = (
    "corruption_budget",
    "greedy_replace",
    "greedy_append",
    "greedy_delete"
)


def corruption_budget(n: int, eps: float) -> int:
    """``floor(n * eps)``, robust to ``n * eps`` landing a hair under an integer"""
    return int(math.floor(n * eps + 1e-9))


def _extreme(scores: np.ndarray, valid: np.ndarray, push: int) -> int:
    values = scores[valid]
    pick = np.argmin(values) if push != DECIDE_P else np.argmax(values)
    return int(valid[pick])


def greedy_replace(counts: np.ndarray, scores: np.ndarray, valid: np.ndarray, budget: int, push: int) -> np.ndarray:
    """Replace up to ``budget`` samples, most helpful to the truth first, by the extreme symbol.

    ``push`` is the decision the adversary wants. Only replacements that move
    the statistic towards it are made.
    """
    out = counts.copy()
    target = _extreme(scores, valid, push)
    sign = -1.0 if push != DECIDE_P else 1.0
    # most favourable to the truth first
    order = np.argsort(sign * scores[:-1], kind="stable")
    remaining = budget
    for symbol in order:
        if remaining == 0:
            break
        if symbol == target or out[symbol] == 0 or np.isnan(scores[symbol]):
            continue
        if sign * scores[symbol] >= sign * scores[target]:
            break
        moved = min(int(out[symbol]), remaining)
        out[symbol] -= moved
        out[target] += moved
        remaining -= moved
    return out


def greedy_append(counts: np.ndarray, scores: np.ndarray, valid: np.ndarray, budget: int, push: int) -> np.ndarray:
    """Append ``budget`` copies of the extreme symbol"""
    out = counts.copy()
    out[_extreme(scores, valid, push)] += budget
    return out


def greedy_delete(counts: np.ndarray, scores: np.ndarray, budget: int, push: int) -> np.ndarray:
    """Delete up to ``budget`` samples that favour the truth, strongest first; deleted
    samples move to the trailing slot"""
    out = counts.copy()
    sign = -1.0 if push != DECIDE_P else 1.0
    order = np.argsort(sign * scores[:-1], kind="stable")
    remaining = budget
    for symbol in order:
        if remaining == 0:
            break
        if out[symbol] == 0 or np.isnan(scores[symbol]):
            continue
        if sign * scores[symbol] >= 0:
            break
        moved = min(int(out[symbol]), remaining)
        out[symbol] -= moved
        out[-1] += moved
        remaining -= moved
    return out
