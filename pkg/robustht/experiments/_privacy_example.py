# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
from typing import Any, Dict, Optional, Tuple

import numpy as np

from robustht.complexity import PrivacyCurve, privacy_curves
from robustht.config import PRIVACY_ETA_GRID, PRIVACY_GAMMA_GRID, PRIVACY_JUMP_FRACTION, PRIVACY_N_GRID
from robustht.dist import Dist
from robustht.utils.helpers import log_grid
from ._families import privacy_example_pair

__all__ = (
    "PrivacyExample",
    "privacy_experiment"
)

logger = logging.getLogger(__name__)

Grid = Tuple[float, float, int]


class PrivacyExample:
    """This object shows the privacy curves of one pair with its regime summaries

    Attributes
    ----------
        p, q: :class:`Dist`
        curve: :class:`PrivacyCurve`
        flat_ratio: :obj:`float`
            ``max / min`` of ``n_priv`` over grid levels strictly between ``tv`` and ``tv^2 / hel^2``.
        transformation_jump: :obj:`float`
            ``N_transformation(tv / 2) / N_transformation(hel^2 / 10)``.
        jump_ratio, jump_location: :obj:`float`
            Steepest rise of ``N_transformation`` over an ``eta`` window below ``tv / 2``
            and the window center, which sits near ``hel^2``.
    """
    __slots__ = (
        "p",
        "q",
        "curve",
        "flat_ratio",
        "transformation_jump",
        "jump_ratio",
        "jump_location"
    )

    def __init__(self, p: Dist, q: Dist, curve: PrivacyCurve) -> None:
        self.p = p
        self.q = q
        self.curve = curve
        hel, tv = curve.hel_sq, curve.tv
        flat = (curve.gamma_grid > tv) & (curve.gamma_grid < tv ** 2 / hel)
        values = curve.n_priv[flat]
        self.flat_ratio = float(values.max() / values.min()) if values.size else float("nan")
        self.transformation_jump = curve.n_transformation_at(tv / 2.0) / curve.n_transformation_at(hel / 10.0)
        self.jump_ratio, self.jump_location = curve.steepest_transformation_window(eta_max=tv / 2.0)

    @property
    def jump_floor(self) -> float:
        """:obj:`float`: ``PRIVACY_JUMP_FRACTION * hel^2 / tv^2``"""
        return PRIVACY_JUMP_FRACTION * self.curve.hel_sq / self.curve.tv ** 2

    def to_json(self) -> Dict[str, Any]:
        return {
            "p": self.p.to_json(),
            "q": self.q.to_json(),
            "hel_sq": self.curve.hel_sq,
            "tv": self.curve.tv,
            "flat_ratio": self.flat_ratio,
            "transformation_jump": self.transformation_jump,
            "jump_floor": self.jump_floor,
            "jump_ratio": self.jump_ratio,
            "jump_location": self.jump_location
        }


def privacy_experiment(alpha: Optional[float] = None, p: Optional[Dist] = None, q: Optional[Dist] = None,
                       c_priv: float = 1.0, gamma_grid: Grid = PRIVACY_GAMMA_GRID, n_grid: Grid = PRIVACY_N_GRID,
                       eta_grid: Grid = PRIVACY_ETA_GRID) -> PrivacyExample:
    """Privacy curves for an explicit pair, or for the three-point example family at ``alpha``"""
    if p is None or q is None:
        if alpha is None:
            raise ValueError("give either alpha or both p and q")
        p, q = privacy_example_pair(alpha)
    grids = [log_grid(float(start), float(stop), int(points)) for start, stop, points in (gamma_grid, n_grid, eta_grid)]
    curve = privacy_curves(p, q, *grids, c_priv=c_priv)
    example = PrivacyExample(p, q, curve)
    logger.info(f"privacy: hel^2={curve.hel_sq:.3e}, tv={curve.tv:.3e}, flat ratio {example.flat_ratio:.3g}, "
                f"steepest transformation rise {example.jump_ratio:.3g} near eta={example.jump_location:.3e}")
    if not np.isfinite(example.transformation_jump):
        logger.warning("transformation curve is not finite at tv/2 or hel^2/10; widen the n grid")
    return example
