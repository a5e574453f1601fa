# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from robustht._error import InvariantViolation, MembershipError
from robustht.config import DEGENERATE_TOLERANCE, LFD_SUM_TOLERANCE, RESIDUAL_TOLERANCE
from robustht.dist import Dist, Model, as_measure, likelihood_ratios, lr_partition, set_membership
from ._clips import ClipPair, solve_clips

__all__ = (
    "LfdPair",
    "build_lfds",
    "build_lfds_uncalibrated",
    "clipped_log_ratios"
)

logger = logging.getLogger(__name__)


class LfdPair:
    """This object shows a calibrated least favourable pair

    Attributes
    ----------
        model: :class:`Model`
            Contamination model the pair was built for.
        eps: :obj:`float`
            Contamination level around ``p``.
        eps_q: :obj:`float`
            Contamination level around ``q``; equal to :attr:`eps` except for
            asymmetric subtractive pairs.
        p, q: :class:`Dist`
            The nominal pair.
        p_star, q_star: :class:`Dist`
            The least favourable distributions.
        clips: :class:`ClipPair`
            Clips used by the construction.
    """
    __slots__ = (
        "model",
        "eps",
        "eps_q",
        "p",
        "q",
        "p_star",
        "q_star",
        "clips"
    )

    def __init__(self, model: Model, eps: float, p: Dist, q: Dist, p_star: Dist, q_star: Dist,
                 clips: ClipPair, eps_q: Optional[float] = None) -> None:
        self.model = Model.parse(model)
        self.eps = float(eps)
        self.eps_q = self.eps if eps_q is None else float(eps_q)
        self.p = p
        self.q = q
        self.p_star = p_star
        self.q_star = q_star
        self.clips = clips

    @property
    def degenerate_high(self) -> bool:
        return self.clips.degenerate_high

    @property
    def degenerate_low(self) -> bool:
        return self.clips.degenerate_low

    @property
    def ratio_scale(self) -> float:
        """:obj:`float`: Constant factor between ``p_star/q_star`` and the clipped ratio.
        One unless the subtractive levels differ."""
        if self.model is Model.SUB:
            return (1.0 + self.eps) / (1.0 + self.eps_q)
        return 1.0

    def verify(self, tol: float = RESIDUAL_TOLERANCE) -> None:
        """Check normalization, set membership and the clipped ratio range.

        Raises
        ------
            :class:`MembershipError`
                A least favourable distribution left its uncertainty set.
            :class:`InvariantViolation`
                Normalization or the ratio range failed.
        """
        for name, star in (("p_star", self.p_star), ("q_star", self.q_star)):
            total = float(star.probs.sum())
            if abs(total - 1.0) > LFD_SUM_TOLERANCE:
                raise InvariantViolation(f"{name} sums to {total!r}")
        if not set_membership(self.p_star, self.p, self.eps, self.model, tol=tol):
            raise MembershipError(f"p_star is outside the {self.model.value} set of radius {self.eps}")
        if not set_membership(self.q_star, self.q, self.eps_q, self.model, tol=tol):
            raise MembershipError(f"q_star is outside the {self.model.value} set of radius {self.eps_q}")

        both = (self.p_star.probs > 0) & (self.q_star.probs > 0)
        ratios = self.p_star.probs[both] / self.q_star.probs[both] / self.ratio_scale
        slack = 1e-9
        if ratios.size and (ratios.min() < self.clips.lower * (1 - slack) or ratios.max() > self.clips.upper * (1 + slack)):
            raise InvariantViolation(f"likelihood ratios {ratios.min()!r}..{ratios.max()!r} escape the clips {self.clips!r}")

    def to_json(self) -> Dict[str, Any]:
        data = {
            "model": self.model.value,
            "eps": self.eps,
            "clips": self.clips.to_json(),
            "p_star": self.p_star.to_json(),
            "q_star": self.q_star.to_json(),
            "degenerate_high": self.degenerate_high,
            "degenerate_low": self.degenerate_low
        }
        if self.eps_q != self.eps:
            data["eps_q"] = self.eps_q
        return data

    def __repr__(self) -> str:
        return f"LfdPair(model={self.model.value!r}, eps={self.eps!r}, clips={self.clips!r})"


def _apply_formulas(p: np.ndarray, q: np.ndarray, clips: Any, model: Model,
                    eps_p: float, eps_q: float) -> Tuple[np.ndarray, np.ndarray]:
    part = lr_partition(p, q, clips)
    low, high = list(part.low), list(part.high)
    cl, cu = clips.lower, clips.upper
    if model is Model.HUB:
        p_star = (1.0 - eps_p) * p
        q_star = (1.0 - eps_q) * q
        p_star[low] = (1.0 - eps_p) * cl * q[low]
        q_star[high] = (1.0 - eps_q) * p[high] / cu
    elif model is Model.TV:
        p_star = p.copy()
        q_star = q.copy()
        total = p + q
        p_star[low] = cl * total[low] / (1.0 + cl)
        q_star[low] = total[low] / (1.0 + cl)
        p_star[high] = cu * total[high] / (1.0 + cu)
        q_star[high] = total[high] / (1.0 + cu)
    else:
        p_star = (1.0 + eps_p) * p
        q_star = (1.0 + eps_q) * q
        p_star[high] = cu * (1.0 + eps_p) * q[high]
        q_star[low] = (1.0 + eps_q) * p[low] / cl
    return p_star, q_star


def build_lfds_uncalibrated(p: Union[Dist, np.ndarray], q: Union[Dist, np.ndarray], clips: Any,
                            model: Union[Model, str], eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate the LFD formulas of ``model`` at arbitrary clips.

    The result is a pair of nonnegative measures which need not sum to one.
    """
    if not clips.lower < 1.0 < clips.upper:
        raise ValueError(f"clips must straddle 1, got ({clips.lower}, {clips.upper})")
    model = Model.parse(model)
    return _apply_formulas(as_measure(p).copy(), as_measure(q).copy(), clips, model, eps, eps)


def _censor_bar(star: np.ndarray, base: np.ndarray, bar: Tuple[int, ...], eps: float) -> None:
    # Spread the whole reduction proportionally over the bar set; a bar at the
    # degenerate boundary is removed outright.
    idx = list(bar)
    bar_mass = float(base[idx].sum())
    values = (1.0 + eps) * base[idx] * (1.0 - eps / ((1.0 + eps) * bar_mass))
    star[idx] = np.where(values > DEGENERATE_TOLERANCE, values, 0.0)


def build_lfds(p: Dist, q: Dist, eps: float, model: Union[Model, str], eps_q: Optional[float] = None) -> LfdPair:
    """Construct the least favourable pair of ``model`` at level ``eps``

    Parameters
    ----------
        p, q: :class:`Dist`
            The nominal pair.
        eps: :obj:`float`
            Contamination level.
        model: :class:`Model`
            Contamination model.
        eps_q: :obj:`float`, optional
            Level around ``q`` for asymmetric subtractive contamination.

    Returns
    -------
        :class:`LfdPair`
    """
    model = Model.parse(model)
    clips = solve_clips(p, q, eps, model, eps_q=eps_q)
    eps_q = eps if eps_q is None else float(eps_q)
    pa, qa = p.probs.copy(), q.probs.copy()
    p_star, q_star = _apply_formulas(pa, qa, clips, model, eps, eps_q)

    if model is Model.SUB:
        part = lr_partition(pa, qa, clips)
        if clips.degenerate_high:
            _censor_bar(p_star, pa, part.bar_high, eps)
        if clips.degenerate_low:
            _censor_bar(q_star, qa, part.bar_low, eps_q)

    lfds = LfdPair(
        model=model,
        eps=eps,
        eps_q=eps_q,
        p=p,
        q=q,
        p_star=Dist(p_star, tolerance=LFD_SUM_TOLERANCE),
        q_star=Dist(q_star, tolerance=LFD_SUM_TOLERANCE),
        clips=clips
    )
    lfds.verify()
    logger.debug(f"Built {lfds!r}")
    return lfds


def clipped_log_ratios(lfds: LfdPair) -> np.ndarray:
    """Per-symbol clipped log-likelihood ratio of a least favourable pair.

    ``log(p_star/q_star)`` where both charge. Where both vanish on a symbol the
    nominal pair still charges (subtractive censoring), the nominal ratio clipped
    to the clips is used. Symbols outside both nominal supports are ``nan``.
    """
    ps, qs = lfds.p_star.probs, lfds.q_star.probs
    raw = likelihood_ratios(lfds.p, lfds.q)
    psi = np.full(ps.size, np.nan)
    with np.errstate(divide="ignore"):
        both = (ps > 0) & (qs > 0)
        psi[both] = np.log(ps[both] / qs[both])
        psi[(ps > 0) & (qs == 0)] = math.inf
        psi[(ps == 0) & (qs > 0)] = -math.inf
        censored = (ps == 0) & (qs == 0) & ~np.isnan(raw)
        psi[censored] = np.log(np.clip(raw[censored], lfds.clips.lower, lfds.clips.upper)) + math.log(lfds.ratio_scale)
    return psi
