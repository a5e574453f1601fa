# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, List, Sequence, Union

from robustht.config import DEFAULT_EPS_GRID, SLOPE_MIN_R2
from robustht.dist import Model, hellinger_sq
from robustht.lfd import build_lfds
from robustht.utils.helpers import fit_loglog_slope
from ._families import JumpFamilyInstance

__all__ = (
    "JumpTable",
    "jump_experiment"
)

logger = logging.getLogger(__name__)

COLUMNS = ("eps", "eps1", "eps2", "hel_sq_eps1", "hel_sq_eps2", "symbol3_eps1", "predicted_n_eps1", "predicted_n_eps2")


class JumpTable:
    """This object shows a jump-family sweep and its log-log fits

    Attributes
    ----------
        model: :class:`Model`
        t: :obj:`float`
        rows: :obj:`list` of :obj:`dict`
            One row per ``eps`` with the columns of :data:`COLUMNS`.
        slopes: :obj:`dict`
            ``{"eps2", "eps1", "symbol3"}`` -> ``(slope, intercept, r_squared)``.
    """
    __slots__ = (
        "model",
        "t",
        "rows",
        "slopes"
    )
    columns = COLUMNS

    def __init__(self, model: Model, t: float, rows: List[Dict[str, float]]) -> None:
        self.model = model
        self.t = t
        self.rows = rows
        eps = [row["eps"] for row in rows]
        self.slopes = {
            "eps2": fit_loglog_slope(eps, [row["hel_sq_eps2"] for row in rows]),
            "eps1": fit_loglog_slope(eps, [row["hel_sq_eps1"] for row in rows]),
            "symbol3": fit_loglog_slope(eps, [row["symbol3_eps1"] for row in rows])
        }

    @property
    def expected_symbol3_slope(self) -> float:
        """:obj:`float`: ``1 + 2t`` for TV and Huber, ``1 + t`` for subtractive"""
        return 1 + self.t if self.model is Model.SUB else 1 + 2 * self.t

    @property
    def fits_ok(self) -> bool:
        return all(self.slopes[name][2] >= SLOPE_MIN_R2 for name in ("eps2", "symbol3"))

    def csv_rows(self) -> List[List[float]]:
        return [[row[name] for name in self.columns] for row in self.rows]

    def to_json(self) -> Dict[str, Any]:
        return {
            "model": self.model.value,
            "t": self.t,
            "slopes": {name: {"slope": s, "intercept": a, "r_squared": r2} for name, (s, a, r2) in self.slopes.items()},
            "expected_symbol3_slope": self.expected_symbol3_slope,
            "fits_ok": self.fits_ok
        }


def jump_experiment(eps_grid: Sequence[float] = DEFAULT_EPS_GRID, t: float = 0.25,
                    model: Union[Model, str] = Model.TV) -> JumpTable:
    """Hellinger divergence of the LFDs at both levels of the jump family, with slopes in ``eps``

    The symbol-3 column isolates the term that carries the jump; the total at
    the perturbed level also holds an ``eps^2`` bulk term.
    """
    model = Model.parse(model)
    rows = []
    for eps in sorted(eps_grid, reverse=True):
        instance = JumpFamilyInstance(eps, t, model)
        low = build_lfds(instance.p, instance.q, instance.eps1, model)
        high = build_lfds(instance.p, instance.q, instance.eps2, model)
        hel1 = hellinger_sq(low.p_star, low.q_star)
        hel2 = hellinger_sq(high.p_star, high.q_star)
        symbol3 = (math.sqrt(low.p_star[2]) - math.sqrt(low.q_star[2])) ** 2
        rows.append({
            "eps": float(eps),
            "eps1": instance.eps1,
            "eps2": instance.eps2,
            "hel_sq_eps1": hel1,
            "hel_sq_eps2": hel2,
            "symbol3_eps1": symbol3,
            "predicted_n_eps1": 1.0 / hel1,
            "predicted_n_eps2": 1.0 / hel2
        })
        logger.info(f"jump {model.value} eps={eps:g}: hel^2 {hel1:.3e} at eps1, {hel2:.3e} at eps2")
    return JumpTable(model, t, rows)
