# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from robustht._error import AlphabetMismatch, InvariantViolation, NoFiniteClip, SetsOverlap
from robustht.config import DEGENERATE_TOLERANCE, RESIDUAL_TOLERANCE
from robustht.dist import Dist, Model, as_measure

__all__ = (
    "ClipPair",
    "calibration_target",
    "calibration_residual",
    "solve_clips"
)

logger = logging.getLogger(__name__)


class ClipPair:
    """This object shows the likelihood-ratio clips of a least favourable pair

    Attributes
    ----------
        lower: :obj:`float`
            Lower clip in ``[0, 1)``; zero only when :attr:`degenerate_low` is set.
        upper: :obj:`float`
            Upper clip in ``(1, inf]``; infinite only when :attr:`degenerate_high` is set.
        degenerate_low: :obj:`bool`
            The subtractive lower clip has no finite solution.
        degenerate_high: :obj:`bool`
            The subtractive upper clip has no finite solution.
    """
    __slots__ = (
        "lower",
        "upper",
        "degenerate_low",
        "degenerate_high"
    )

    def __init__(self, lower: float, upper: float, degenerate_low: bool = False, degenerate_high: bool = False) -> None:
        lower, upper = float(lower), float(upper)
        if not (0.0 <= lower < 1.0 < upper):
            raise ValueError(f"clips must satisfy 0 <= lower < 1 < upper, got ({lower}, {upper})")
        if lower == 0.0 and not degenerate_low:
            raise ValueError("a zero lower clip must be flagged degenerate")
        if math.isinf(upper) and not degenerate_high:
            raise ValueError("an infinite upper clip must be flagged degenerate")
        self.lower = lower
        self.upper = upper
        self.degenerate_low = bool(degenerate_low)
        self.degenerate_high = bool(degenerate_high)

    @property
    def log_lower(self) -> float:
        return math.log(self.lower) if self.lower > 0 else -math.inf

    @property
    def log_upper(self) -> float:
        return math.log(self.upper)

    def to_json(self) -> Dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "degenerate_low": self.degenerate_low,
            "degenerate_high": self.degenerate_high
        }

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ClipPair) and self.to_json() == other.to_json()

    def __repr__(self) -> str:
        return f"ClipPair(lower={self.lower!r}, upper={self.upper!r})"


def calibration_target(model: Model, eps: float) -> float:
    """Right-hand side of the one-sided calibration equation"""
    if model is Model.HUB:
        return eps / (1.0 - eps)
    if model is Model.TV:
        return eps
    return eps / (1.0 + eps)


def _side_value(p: np.ndarray, q: np.ndarray, c: float, model: Model) -> float:
    # Decreasing in c on [1, inf).
    if math.isinf(c):
        if model is Model.SUB:
            return float(p[(q == 0) & (p > 0)].sum())
        return 0.0
    if model is Model.HUB:
        return float(np.clip(p / c - q, 0.0, None).sum())
    excess = float(np.clip(p - c * q, 0.0, None).sum())
    if model is Model.TV:
        return excess / (1.0 + c)
    return excess


def calibration_residual(p: Union[Dist, np.ndarray], q: Union[Dist, np.ndarray], clip: float, model: Model,
                         eps: float, side: str = "upper") -> float:
    """Signed residual of the calibration equation at ``clip``.

    ``side="lower"`` evaluates the lower-clip equation, which is the upper
    equation for the swapped pair at ``1/clip``.
    """
    model = Model.parse(model)
    pa, qa = as_measure(p), as_measure(q)
    if side == "lower":
        pa, qa = qa, pa
        clip = math.inf if clip == 0 else 1.0 / clip
    return _side_value(pa, qa, clip, model) - calibration_target(model, eps)


def _solve_upper(p: np.ndarray, q: np.ndarray, target: float, model: Model) -> Tuple[float, bool]:
    """Root in ``(1, inf]`` of the decreasing upper-side equation.

    Breakpoints are the finite ratios above one; between two consecutive ones the
    active set is fixed and the equation has a closed-form root.
    """
    infinite = (q == 0) & (p > 0)
    p_inf = float(p[infinite].sum())

    finite = (q > 0) & (p > q)
    ratios = p[finite] / q[finite]
    order = np.argsort(ratios, kind="stable")
    ratios = ratios[order]
    p_sorted = p[finite][order]
    q_sorted = q[finite][order]
    # suffix[k] = mass of indices k.. in sorted order
    p_suffix = np.concatenate((np.cumsum(p_sorted[::-1])[::-1], [0.0]))
    q_suffix = np.concatenate((np.cumsum(q_sorted[::-1])[::-1], [0.0]))

    if model is Model.SUB and p_inf > 0.0 and p_inf >= target - DEGENERATE_TOLERANCE:
        return math.inf, True

    breakpoints = np.concatenate(([1.0], np.unique(ratios)))
    active = np.searchsorted(ratios, breakpoints, side="right")
    big_p = p_inf + p_suffix[active]
    big_q = q_suffix[active]
    if model is Model.HUB:
        values = big_p / breakpoints - big_q
    elif model is Model.TV:
        values = (big_p - breakpoints * big_q) / (1.0 + breakpoints)
    else:
        values = big_p - breakpoints * big_q

    if values[0] <= target:
        raise NoFiniteClip(f"{model.value} calibration has no root above 1 (value at 1 is {values[0]!r})")

    j = int(np.flatnonzero(values >= target)[-1])
    seg_p, seg_q = float(big_p[j]), float(big_q[j])
    if model is Model.HUB:
        root = seg_p / (seg_q + target)
    elif model is Model.TV:
        root = (seg_p - target) / (seg_q + target)
    else:
        if seg_q <= 0.0:
            raise NoFiniteClip("subtractive calibration segment has no q mass")
        root = (seg_p - target) / seg_q

    right = float(breakpoints[j + 1]) if j + 1 < breakpoints.size else math.inf
    root = min(max(root, float(breakpoints[j])), right)
    if not math.isfinite(root) or root <= 1.0:
        raise NoFiniteClip(f"{model.value} calibration produced clip {root!r}")
    logger.debug(f"{model.value} clip on segment {j} of {breakpoints.size}: {root!r}")
    return root, False


def _separation(p: np.ndarray, q: np.ndarray, model: Model, eps_p: float, eps_q: float) -> None:
    tv = 0.5 * float(np.abs(p - q).sum())
    for name, eps in (("p", eps_p), ("q", eps_q)):
        target = calibration_target(model, eps)
        threshold = 2.0 * target if model is Model.TV else target
        if model is Model.TV:
            label = f"2*eps = {threshold!r}"
        elif model is Model.HUB:
            label = f"eps/(1-eps) = {threshold!r}"
        else:
            label = f"eps_{name}/(1+eps_{name}) = {threshold!r}"
        if tv <= threshold:
            raise SetsOverlap(f"{model.value}: tv(p,q) = {tv!r} <= {label}")


def solve_clips(p: Dist, q: Dist, eps: float, model: Union[Model, str], eps_q: Optional[float] = None) -> ClipPair:
    """Solve the calibration equations for the clips of ``model`` at level ``eps``

    Parameters
    ----------
        p, q: :class:`Dist`
            The nominal pair.
        eps: :obj:`float`
            Contamination level around ``p`` (and ``q`` unless ``eps_q`` is given).
        model: :class:`Model`
            The contamination model.
        eps_q: :obj:`float`, optional
            Level around ``q``; only the subtractive model accepts a different value.

    Returns
    -------
        :class:`ClipPair`

    Raises
    ------
        :class:`SetsOverlap`
            The two uncertainty sets intersect.
        :class:`NoFiniteClip`
            A Huber or TV equation has no root (only reachable through rounding).
    """
    model = Model.parse(model)
    eps_q = eps if eps_q is None else float(eps_q)
    if model is not Model.SUB and eps_q != eps:
        raise ValueError("asymmetric contamination levels are only supported for the subtractive model")
    if not (0.0 < eps < 1.0 and 0.0 < eps_q < 1.0):
        raise ValueError(f"contamination levels must lie in (0, 1), got {eps}, {eps_q}")

    pa, qa = as_measure(p), as_measure(q)
    if pa.shape != qa.shape:
        raise AlphabetMismatch(f"alphabet sizes differ: {pa.size} != {qa.size}")
    _separation(pa, qa, model, eps, eps_q)

    upper, degenerate_high = _solve_upper(pa, qa, calibration_target(model, eps), model)
    inverse_lower, degenerate_low = _solve_upper(qa, pa, calibration_target(model, eps_q), model)
    lower = 0.0 if degenerate_low else 1.0 / inverse_lower

    clips = ClipPair(lower, upper, degenerate_low=degenerate_low, degenerate_high=degenerate_high)
    for side, clip, flagged, level in (("upper", upper, degenerate_high, eps), ("lower", lower, degenerate_low, eps_q)):
        if flagged:
            continue
        residual = calibration_residual(pa, qa, clip, model, level, side=side)
        if abs(residual) > RESIDUAL_TOLERANCE:
            raise InvariantViolation(f"{model.value} {side} clip residual {residual!r} exceeds tolerance")
    return clips
