# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from robustht._error import DistributionError, SetsOverlap
from robustht.config import DEFAULT_TARGET_ERROR
from robustht.dist import Dist, Model, hellinger_sq, tv_distance
from robustht.lfd import build_lfds
from ._exact import exact_sample_complexity

__all__ = (
    "ComplexityEstimate",
    "predicted_sample_complexity",
    "robust_complexity",
    "complexity_curve",
    "hellinger_band",
    "tv_corridor"
)

logger = logging.getLogger(__name__)


class ComplexityEstimate:
    """This object shows a sample-complexity estimate for a (possibly robust) pair

    Attributes
    ----------
        hel_sq: :obj:`float`
            Squared Hellinger divergence between the least favourable pair.
        predicted_n: :obj:`float`
            ``1 / hel_sq``.
        exact_n: :obj:`int`, optional
            Exact sample complexity of the least favourable pair, when computed.
        model: :class:`Model`, optional
            Contamination model, ``None`` for a simple pair.
        eps: :obj:`float`
            Contamination level.
    """
    __slots__ = (
        "hel_sq",
        "predicted_n",
        "exact_n",
        "model",
        "eps"
    )

    def __init__(self, hel_sq: float, model: Optional[Model] = None, eps: float = 0.0,
                 exact_n: Optional[int] = None) -> None:
        self.hel_sq = float(hel_sq)
        self.predicted_n = 1.0 / self.hel_sq
        self.exact_n = exact_n
        self.model = model
        self.eps = float(eps)

    def to_json(self) -> Dict[str, Any]:
        return {
            "hel_sq": self.hel_sq,
            "predicted_n": self.predicted_n,
            "exact_n": self.exact_n,
            "model": self.model.value if self.model is not None else None,
            "eps": self.eps
        }

    def __repr__(self) -> str:
        return f"ComplexityEstimate(hel_sq={self.hel_sq!r}, predicted_n={self.predicted_n!r})"


def predicted_sample_complexity(p: Dist, q: Dist) -> float:
    """``1 / hel^2(p, q)``"""
    hel = hellinger_sq(p, q)
    if hel == 0.0:
        raise DistributionError("p and q coincide; no number of samples separates them")
    return 1.0 / hel


def robust_complexity(p: Dist, q: Dist, eps: float, model: Union[Model, str], exact: bool = False,
                      n_max: int = 200, target_error: float = DEFAULT_TARGET_ERROR) -> ComplexityEstimate:
    """Hellinger-based complexity of the robust problem through its least favourable pair

    ``exact=True`` also runs the exact oracle on the pair, up to ``n_max``.
    """
    model = Model.parse(model)
    tv = tv_distance(p, q)
    if eps > tv / 4:
        logger.warning(f"eps={eps} exceeds tv/4={tv / 4}; estimates leave the usual regime")
    lfds = build_lfds(p, q, eps, model)
    exact_n = None
    if exact:
        exact_n = exact_sample_complexity(lfds.p_star, lfds.q_star, target_error=target_error, n_max=n_max)
    return ComplexityEstimate(hellinger_sq(lfds.p_star, lfds.q_star), model=model, eps=eps, exact_n=exact_n)


def complexity_curve(p: Dist, q: Dist, model: Union[Model, str], eps_grid: Sequence[float]) -> List[Dict[str, Any]]:
    """Sweep ``eps`` and record ``(eps, hel^2, predicted_n)``.

    Levels where the uncertainty sets overlap are kept with regime ``overlap``
    and infinite complexity.
    """
    model = Model.parse(model)
    rows = []
    for eps in sorted(float(e) for e in eps_grid):
        try:
            estimate = robust_complexity(p, q, eps, model)
        except SetsOverlap as e:
            logger.info(f"curve stops being finite at eps={eps}: {e.condition}")
            rows.append({"eps": eps, "hel_sq": 0.0, "predicted_n": math.inf, "regime": "overlap"})
            continue
        rows.append({"eps": eps, "hel_sq": estimate.hel_sq, "predicted_n": estimate.predicted_n, "regime": "separated"})
    return rows


def hellinger_band(hel_sq: float, target_error: float = DEFAULT_TARGET_ERROR) -> Tuple[float, float]:
    """Interval that must contain ``n* * hel^2`` for a simple pair.

    Follows from ``1 - tv(p^n, q^n) >= 1 - sqrt(1 - BC^(2n))`` and
    ``1 - tv(p^n, q^n) <= BC^n`` with ``BC = 1 - hel^2/2``.
    """
    reach = 1.0 - target_error
    lower = math.log(1.0 / (1.0 - reach ** 2)) * (1.0 - hel_sq / 2.0)
    upper = 2.0 * math.log(1.0 / target_error) + hel_sq
    return lower, upper


def tv_corridor(tv: float, target_error: float = DEFAULT_TARGET_ERROR) -> Tuple[float, float]:
    """Interval that must contain ``n*`` given ``tv(p, q)``.

    ``tv(p^n, q^n) <= n tv`` gives the lower end, ``hel^2 >= tv^2`` the upper.
    """
    return (1.0 - target_error) / tv, 2.0 * math.log(1.0 / target_error) / tv ** 2 + 1.0
