# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from robustht._error import InvariantViolation
from robustht.config import PRIVACY_JUMP_WINDOW, PRIVACY_MONOTONE_TOLERANCE
from robustht.dist import Dist, hellinger_sq, tv_distance

__all__ = (
    "d_gamma",
    "PrivacyCurve",
    "privacy_curves"
)


def d_gamma(p: Dist, q: Dist, gamma: float) -> float:
    """``sum q(i) f(p(i)/q(i))`` with ``f(t) = (t - 1) * clip(log t, -gamma, gamma)``

    One-sided symbols contribute ``gamma`` times their mass; ``gamma = inf``
    gives the unclipped divergence.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    pa, qa = p.probs, q.probs
    both = (pa > 0) & (qa > 0)
    ratio = pa[both] / qa[both]
    clipped = np.clip(np.log(ratio), -gamma, gamma)
    value = float(np.sum(qa[both] * (ratio - 1.0) * clipped))
    one_sided = float(pa[(pa > 0) & (qa == 0)].sum() + qa[(qa > 0) & (pa == 0)].sum())
    if one_sided > 0:
        value += gamma * one_sided
    return value


class PrivacyCurve:
    """This object shows the private sample-complexity curve and its inverses

    Attributes
    ----------
        gamma_grid: :class:`numpy.ndarray`
            Increasing privacy levels.
        n_priv: :class:`numpy.ndarray`
            ``c_priv * (1/hel^2 + 1/D_gamma)`` per grid level; nonincreasing.
        n_grid: :class:`numpy.ndarray`
            Increasing sample sizes.
        gamma_star: :class:`numpy.ndarray`
            Smallest grid ``gamma`` with ``n_priv(gamma) <= n``; ``inf`` when none.
        eta_grid: :class:`numpy.ndarray`
            Increasing contamination levels.
        n_transformation: :class:`numpy.ndarray`
            Smallest grid ``n`` with ``n * gamma_star(n) <= 1/eta``; ``inf`` when none.
        hel_sq, tv: :obj:`float`
            Divergences of the pair, used for regime labels.
    """
    __slots__ = (
        "gamma_grid",
        "n_priv",
        "n_grid",
        "gamma_star",
        "eta_grid",
        "n_transformation",
        "hel_sq",
        "tv"
    )

    def __init__(self, gamma_grid, n_priv, n_grid, gamma_star, eta_grid, n_transformation, hel_sq, tv) -> None:
        self.gamma_grid = np.asarray(gamma_grid, dtype=float)
        self.n_priv = np.asarray(n_priv, dtype=float)
        self.n_grid = np.asarray(n_grid, dtype=float)
        self.gamma_star = np.asarray(gamma_star, dtype=float)
        self.eta_grid = np.asarray(eta_grid, dtype=float)
        self.n_transformation = np.asarray(n_transformation, dtype=float)
        self.hel_sq = float(hel_sq)
        self.tv = float(tv)

    def gamma_star_at(self, n: float) -> float:
        """Grid inversion of ``n_priv`` at an arbitrary sample size"""
        hits = np.flatnonzero(self.n_priv <= n)
        return float(self.gamma_grid[hits[0]]) if hits.size else math.inf

    def n_transformation_at(self, eta: float) -> float:
        """``min{n in n_grid : n * gamma_star(n) <= 1/eta}``"""
        with np.errstate(invalid="ignore"):
            hits = np.flatnonzero(self.n_grid * self.gamma_star <= 1.0 / eta)
        return float(self.n_grid[hits[0]]) if hits.size else math.inf

    def steepest_transformation_window(self, factor: float = PRIVACY_JUMP_WINDOW,
                                       eta_max: Optional[float] = None) -> Tuple[float, float]:
        """Largest rise of ``N_transformation`` across an ``eta`` window of ratio ``factor``

        Windows run from each grid level ``eta`` to the first grid level at or
        above ``factor * eta``; windows ending past ``eta_max`` or touching an
        infinite value are skipped.

        Returns
        -------
            :obj:`tuple` of (:obj:`float`, :obj:`float`)
                The ratio ``N(end) / N(start)`` and the geometric center of the window,
                ``(nan, nan)`` when no window qualifies.
        """
        if not factor > 1:
            raise ValueError(f"factor must exceed 1, got {factor!r}")
        etas, values = self.eta_grid, self.n_transformation
        best, center = math.nan, math.nan
        for i, eta in enumerate(etas):
            j = int(np.searchsorted(etas, factor * eta, side="left"))
            if j >= etas.size or (eta_max is not None and etas[j] > eta_max):
                break
            if not (np.isfinite(values[i]) and np.isfinite(values[j])):
                continue
            ratio = float(values[j] / values[i])
            if not ratio <= best:
                best, center = ratio, math.sqrt(eta * etas[j])
        return best, center

    def robust_bracket(self, eta: float, c1: float = 1.0, c2: float = 1.0, c3: float = 1.0) -> Tuple[float, float]:
        """Bracket on the robust sample complexity at level ``eta``.

        The transformation constants rescale the level:
        ``N(eta / (c1 c3)) <~ n_rob(eta) <~ N(eta / c2)``.
        """
        if not (0 < c2 < c1 and c3 > 0):
            raise ValueError("transformation constants need 0 < c2 < c1 and c3 > 0")
        return self.n_transformation_at(eta / (c1 * c3)), self.n_transformation_at(eta / c2)

    def gamma_regime(self, gamma: float) -> str:
        if gamma < self.tv:
            return "gamma<tv"
        if gamma < self.tv ** 2 / self.hel_sq:
            return "flat"
        return "gamma>tv^2/hel^2"

    def eta_regime(self, eta: float) -> str:
        if eta < self.hel_sq:
            return "eta<hel^2"
        if eta < self.tv:
            return "hel^2<eta<tv"
        return "eta>tv"

    def rows(self) -> List[Tuple[str, float, float, str]]:
        """``(curve, x, value, regime_label)`` rows for CSV output"""
        out = []
        for gamma, value in zip(self.gamma_grid, self.n_priv):
            out.append(("n_priv", float(gamma), float(value), self.gamma_regime(gamma)))
        for n, value in zip(self.n_grid, self.gamma_star):
            out.append(("gamma_star", float(n), float(value), "n<1/tv^2" if n < 1.0 / self.tv ** 2 else "n>=1/tv^2"))
        for eta, value in zip(self.eta_grid, self.n_transformation):
            out.append(("n_transformation", float(eta), float(value), self.eta_regime(eta)))
        return out

    def to_json(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in self.__slots__}


def privacy_curves(p: Dist, q: Dist, gamma_grid: Sequence[float], n_grid: Sequence[float],
                   eta_grid: Sequence[float], c_priv: float = 1.0) -> PrivacyCurve:
    """Evaluate ``n_priv``, its grid inverse ``gamma_star`` and ``N_transformation``

    Parameters
    ----------
        p, q: :class:`Dist`
            A pair with ``p != q``.
        gamma_grid, n_grid, eta_grid: sequence of :obj:`float`
            Sorted positive grids.
        c_priv: :obj:`float`, optional
            Constant multiplying the private sample-complexity representative.

    Raises
    ------
        :class:`InvariantViolation`
            ``n_priv`` rises along the gamma grid beyond rounding.
    """
    grids = [np.asarray(g, dtype=float) for g in (gamma_grid, n_grid, eta_grid)]
    for grid in grids:
        if grid.size == 0 or grid.min() <= 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grids must be nonempty, positive and strictly increasing")
    gammas, ns, etas = grids

    hel = hellinger_sq(p, q)
    tv = tv_distance(p, q)
    with np.errstate(divide="ignore"):
        n_priv = c_priv * (1.0 / hel + 1.0 / np.array([d_gamma(p, q, g) for g in gammas]))
    with np.errstate(invalid="ignore"):
        rises = np.flatnonzero(n_priv[1:] > n_priv[:-1] * (1.0 + PRIVACY_MONOTONE_TOLERANCE))
    if rises.size:
        i = int(rises[0])
        raise InvariantViolation(f"n_priv increases from {n_priv[i]!r} at gamma={gammas[i]:g} "
                                 f"to {n_priv[i + 1]!r} at gamma={gammas[i + 1]:g}")
    # flatten sub-tolerance rounding only
    n_priv = np.minimum.accumulate(n_priv)

    # n_priv is nonincreasing, so the first hit is the smallest gamma
    order = np.searchsorted(-n_priv, -ns, side="left")
    gamma_star = np.where(order < gammas.size, gammas[np.minimum(order, gammas.size - 1)], math.inf)

    with np.errstate(invalid="ignore"):
        product = ns * gamma_star
    n_transformation = np.empty(etas.size)
    for i, eta in enumerate(etas):
        hits = np.flatnonzero(product <= 1.0 / eta)
        n_transformation[i] = ns[hits[0]] if hits.size else math.inf

    return PrivacyCurve(gammas, n_priv, ns, gamma_star, etas, n_transformation, hel, tv)
