# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from robustht._error import RobustHTError
from robustht.config import (
    CLIP_PAIRS_PER_INSTANCE,
    DEFAULT_DELTA0,
    DEFAULT_EPS_GRID,
    SANDWICH_RATIO_BAND,
    SANDWICH_REL_TOLERANCE
)
from robustht.dist import Dist, Model, as_measure, hellinger_sq, likelihood_ratios
from robustht.lfd import ClipPair, build_lfds, build_lfds_uncalibrated, solve_clips
from ._families import JumpFamilyInstance

__all__ = (
    "SandwichReport",
    "approx_hellinger_decomposition",
    "decomposition_band",
    "monotone_contribution_check",
    "clip_ordering_check",
    "tv_clip_monotonicity_check",
    "sandwich_certify",
    "delta0_counterexample"
)

logger = logging.getLogger(__name__)

Instance = Tuple[Dist, Dist, float]


def _le(a: float, b: float) -> bool:
    return a <= b * (1.0 + SANDWICH_REL_TOLERANCE) + 1e-15


def approx_hellinger_decomposition(p: Any, q: Any, delta0: float = DEFAULT_DELTA0) -> Tuple[float, float, float, float]:
    """Split ``hel^2`` into the regions ``A = {p >= q}`` and ``B = {p < q}`` with surrogate forms

    Returns
    -------
        :obj:`tuple`
            ``(h_A^2, h_B^2, tilde_h_A^2, tilde_h_B^2)`` where
            ``tilde_h_A^2 = p(A_2) + sum_{A_1} (p - q)^2 / p`` and ``A_2`` holds the
            ratios above ``1 + delta0``; ``B`` mirrors this with ``q``.
    """
    if delta0 <= 0:
        raise ValueError("delta0 must be positive")
    ratios = likelihood_ratios(p, q)
    pa, qa = as_measure(p), as_measure(q)
    live = ~np.isnan(ratios)
    in_a = live & (ratios >= 1.0)
    in_b = live & (ratios < 1.0)
    terms = (np.sqrt(pa) - np.sqrt(qa)) ** 2
    a2 = in_a & (ratios > 1.0 + delta0)
    a1 = in_a & ~a2
    b2 = in_b & (ratios < 1.0 / (1.0 + delta0))
    b1 = in_b & ~b2
    with np.errstate(divide="ignore", invalid="ignore"):
        sq = (pa - qa) ** 2
        tilde_a = float(pa[a2].sum()) + float(np.sum(sq[a1] / pa[a1]))
        tilde_b = float(qa[b2].sum()) + float(np.sum(sq[b1] / qa[b1]))
    return float(terms[in_a].sum()), float(terms[in_b].sum()), tilde_a, tilde_b


def decomposition_band(delta0: float = DEFAULT_DELTA0) -> Tuple[float, float]:
    """Constants ``(lo, hi)`` with ``lo * h^2 <= tilde_h^2 <= hi * h^2`` on each region"""
    return 1.0, max(4.0, 1.0 / (1.0 - 1.0 / math.sqrt(1.0 + delta0)) ** 2)


def _regional(p: Dist, q: Dist, lfd_p: Dist, lfd_q: Dist) -> Tuple[float, float]:
    ratios = likelihood_ratios(p, q)
    live = ~np.isnan(ratios)
    terms = (np.sqrt(lfd_p.probs) - np.sqrt(lfd_q.probs)) ** 2
    return float(terms[live & (ratios >= 1.0)].sum()), float(terms[live & (ratios < 1.0)].sum())


def monotone_contribution_check(p: Dist, q: Dist, eps1: float, eps2: float, constant: float = 2.0) -> bool:
    """Region contributions of the subtractive LFDs shrink by at most ``constant`` from ``eps1`` to ``eps2``

    Regions are taken from the nominal likelihood ratio, so they are the same at
    both levels.
    """
    if eps1 > eps2:
        raise ValueError("need eps1 <= eps2")
    low = build_lfds(p, q, eps1, Model.SUB)
    high = build_lfds(p, q, eps2, Model.SUB)
    a1, b1 = _regional(p, q, low.p_star, low.q_star)
    a2, b2 = _regional(p, q, high.p_star, high.q_star)
    return _le(a2, constant * a1) and _le(b2, constant * b1)


def clip_ordering_check(p: Dist, q: Dist, eps: float) -> bool:
    """TV clips at ``eps / 2`` bracket the Huber clips at ``eps``"""
    tv = solve_clips(p, q, eps / 2.0, Model.TV)
    hub = solve_clips(p, q, eps, Model.HUB)
    return _le(tv.lower, hub.lower) and _le(hub.upper, tv.upper)


def tv_clip_monotonicity_check(p: Dist, q: Dist, rng: np.random.Generator,
                               pairs: int = CLIP_PAIRS_PER_INSTANCE) -> int:
    """Count violations of monotone uncalibrated TV divergence under random clip moves

    Raising the upper clip may not lower ``hel^2``; raising the lower clip may not
    raise it.
    """
    def hel(lower: float, upper: float) -> float:
        p_t, q_t = build_lfds_uncalibrated(p, q, ClipPair(lower, upper), Model.TV, 0.0)
        return hellinger_sq(p_t, q_t)

    violations = 0
    for _ in range(pairs):
        lower, lower_up = np.sort(rng.uniform(1e-6, 1.0, size=2))
        upper, upper_up = np.sort(1.0 / rng.uniform(1e-6, 1.0, size=2))
        if lower_up >= 1.0 or upper <= 1.0:
            continue
        base = hel(lower, upper)
        if not _le(base, hel(lower, upper_up)):
            violations += 1
        if not _le(hel(lower_up, upper), base):
            violations += 1
    return violations


class SandwichReport:
    """This object shows the comparison checks for one ``(p, q, eps)`` instance

    Attributes
    ----------
        instance_id: :obj:`int`
        eps: :obj:`float`
        checks: :obj:`dict`
            Check name -> :obj:`bool`.
        ratios: :obj:`dict`
            Realized ``hel^2`` ratios behind the checks, for recording slack.
        error: :obj:`str`, optional
            Set when the instance could not be evaluated.
    """
    __slots__ = (
        "instance_id",
        "eps",
        "checks",
        "ratios",
        "error"
    )

    def __init__(self, instance_id: int, eps: float, checks: Dict[str, bool], ratios: Dict[str, float],
                 error: Optional[str] = None) -> None:
        self.instance_id = instance_id
        self.eps = eps
        self.checks = checks
        self.ratios = ratios
        self.error = error

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_json(self) -> Dict[str, Any]:
        return {
            "instance_id": self.instance_id,
            "eps": self.eps,
            "passed": self.passed,
            "checks": dict(self.checks),
            "ratios": dict(self.ratios),
            "error": self.error
        }

    def __repr__(self) -> str:
        return f"SandwichReport({self.instance_id}, passed={self.passed})"


def _certify_one(instance_id: int, p: Dist, q: Dist, eps: float, delta0: float) -> SandwichReport:
    hel = {
        "tv": hellinger_sq(*_pair(p, q, eps, Model.TV)),
        "tv_half": hellinger_sq(*_pair(p, q, eps / 2.0, Model.TV)),
        "hub": hellinger_sq(*_pair(p, q, eps, Model.HUB)),
        "sub": hellinger_sq(*_pair(p, q, eps, Model.SUB)),
        "sub_tv_scaled": hellinger_sq(*_pair(p, q, (2.0 + delta0) * eps, Model.SUB)),
        "sub_hub_scaled": hellinger_sq(*_pair(p, q, (1.0 + delta0) * eps, Model.SUB))
    }
    sub = build_lfds(p, q, eps, Model.SUB)
    h_a, h_b, t_a, t_b = approx_hellinger_decomposition(sub.p_star, sub.q_star, delta0)
    lo, hi = decomposition_band(delta0)
    ratios = {
        "tv_over_hub": hel["tv"] / hel["hub"],
        "half_hub_over_tv_half": 0.5 * hel["hub"] / hel["tv_half"],
        "sub_over_tv": hel["sub"] / hel["tv"],
        "sub_over_hub": hel["sub"] / hel["hub"],
        "sub_scaled_over_tv": hel["sub_tv_scaled"] / hel["tv"],
        "sub_scaled_over_hub": hel["sub_hub_scaled"] / hel["hub"]
    }
    checks = {
        "tv_le_hub": _le(hel["tv"], hel["hub"]),
        "half_hub_le_tv_half": _le(0.5 * hel["hub"], hel["tv_half"]),
        "clip_ordering": clip_ordering_check(p, q, eps),
        "sub_ge_tv": _le(hel["tv"], hel["sub"]),
        "sub_ge_hub": _le(hel["hub"], hel["sub"]),
        "sub_tv_band": ratios["sub_scaled_over_tv"] <= SANDWICH_RATIO_BAND,
        "sub_hub_band": ratios["sub_scaled_over_hub"] <= SANDWICH_RATIO_BAND,
        "decomposition_band": all(_le(lo * h, t) and _le(t, hi * h) for h, t in ((h_a, t_a), (h_b, t_b))),
        "monotone_contributions": monotone_contribution_check(p, q, eps / 2.0, eps)
    }
    return SandwichReport(instance_id, eps, checks, ratios)


def _pair(p: Dist, q: Dist, eps: float, model: Model) -> Tuple[Dist, Dist]:
    lfds = build_lfds(p, q, eps, model)
    return lfds.p_star, lfds.q_star


def sandwich_certify(corpus: Sequence[Instance], delta0: float = DEFAULT_DELTA0) -> List[SandwichReport]:
    """Run every comparison check on each ``(p, q, eps)``; failures are recorded, never raised"""
    reports = []
    for index, (p, q, eps) in enumerate(corpus):
        try:
            report = _certify_one(index, p, q, float(eps), delta0)
        except (RobustHTError, ValueError, ZeroDivisionError) as exc:
            report = SandwichReport(index, float(eps), {}, {}, error=f"{type(exc).__name__}: {exc}")
        if not report.passed:
            logger.warning(f"sandwich instance {index} failed: {report.failures or report.error}")
        reports.append(report)
    logger.info(f"sandwich: {sum(r.passed for r in reports)}/{len(reports)} instances passed")
    return reports


def delta0_counterexample(eps_grid: Sequence[float] = DEFAULT_EPS_GRID, t: float = 0.25) -> List[Dict[str, float]]:
    """``hel^2`` of subtractive LFDs at ``2 eps1`` over TV LFDs at ``eps1`` on the jump family.

    The ratio grows without bound as ``eps`` shrinks.
    """
    rows = []
    for eps in sorted(eps_grid, reverse=True):
        instance = JumpFamilyInstance(eps, t, Model.TV)
        p, q, eps1 = instance.p, instance.q, instance.eps1
        hel_tv = hellinger_sq(*_pair(p, q, eps1, Model.TV))
        hel_sub = hellinger_sq(*_pair(p, q, 2.0 * eps1, Model.SUB))
        rows.append({"eps": float(eps), "eps1": eps1, "hel_sq_tv": hel_tv, "hel_sq_sub": hel_sub,
                     "ratio": hel_sub / hel_tv})
    return rows
