# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from robustht.dist import Dist, Model, set_membership
from robustht.lfd import build_lfds
from ._families import random_sub_member, two_point

__all__ = (
    "NoSimulationWitness",
    "no_simulation_witnesses",
    "containment_check"
)

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = (2.0, 10.0, 100.0)
CLOSED_FORM_TOLERANCE = 1e-12


class NoSimulationWitness:
    """This object shows one two-point witness and the membership pattern it should produce

    Attributes
    ----------
        part: :obj:`str`
            Which non-containment the witness exhibits.
        factor: :obj:`float`
            The rescaling ``C`` of the second set.
        eps: :obj:`float`
        centers: :obj:`tuple` of :class:`Dist`
            Nominal distribution(s) the sets are built around.
        candidates: :obj:`tuple` of :class:`Dist`
            Point(s) tested for membership, one per center.
        expected: :obj:`dict`
            Claim name -> expected :obj:`bool`.
        observed: :obj:`dict`
            Claim name -> computed :obj:`bool`.
    """
    __slots__ = (
        "part",
        "factor",
        "eps",
        "centers",
        "candidates",
        "expected",
        "observed"
    )

    def __init__(self, part: str, factor: float, eps: float, centers: Tuple[Dist, ...], candidates: Tuple[Dist, ...],
                 expected: Dict[str, bool], observed: Dict[str, bool]) -> None:
        self.part = part
        self.factor = factor
        self.eps = eps
        self.centers = centers
        self.candidates = candidates
        self.expected = expected
        self.observed = observed

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_json(self) -> Dict[str, Any]:
        return {
            "part": self.part,
            "factor": self.factor,
            "eps": self.eps,
            "centers": [c.to_json() for c in self.centers],
            "candidates": [c.to_json() for c in self.candidates],
            "expected": dict(self.expected),
            "observed": dict(self.observed),
            "ok": self.ok
        }

    def __repr__(self) -> str:
        return f"NoSimulationWitness({self.part!r}, C={self.factor:g}, ok={self.ok})"


def _pair_in(lfds: Tuple[Dist, Dist], centers: Tuple[Dist, Dist], eps: float, model: Model) -> bool:
    return all(set_membership(star, center, eps, model) for star, center in zip(lfds, centers))


def _matches(star: Dist, expected: Sequence[float]) -> bool:
    return bool(np.allclose(star.probs, expected, rtol=0.0, atol=CLOSED_FORM_TOLERANCE))


def _single_witnesses(factor: float, eps: float) -> List[NoSimulationWitness]:
    c_eps = factor * eps
    out = []

    center, point = two_point(eps), two_point(0.0)
    out.append(NoSimulationWitness(
        "tv-not-in-hub", factor, eps, (center,), (point,),
        {"in_tv": True, "in_hub_scaled": False},
        {"in_tv": set_membership(point, center, eps, Model.TV),
         "in_hub_scaled": set_membership(point, center, c_eps, Model.HUB)}))

    center, point = two_point(0.0), two_point(eps)
    out.append(NoSimulationWitness(
        "tv-not-in-sub", factor, eps, (center,), (point,),
        {"in_tv": True, "in_sub_scaled": False},
        {"in_tv": set_membership(point, center, eps, Model.TV),
         "in_sub_scaled": set_membership(point, center, c_eps, Model.SUB)}))

    shrunk = eps / factor
    center, point = two_point(1.0), two_point(1.0 - shrunk)
    out.append(NoSimulationWitness(
        "hub-not-in-sub", factor, eps, (center,), (point,),
        {"in_hub_shrunk": True, "in_sub": False},
        {"in_hub_shrunk": set_membership(point, center, shrunk, Model.HUB),
         "in_sub": set_membership(point, center, eps, Model.SUB)}))

    center, point = two_point(eps / (1.0 + eps)), two_point(0.0)
    out.append(NoSimulationWitness(
        "sub-not-in-hub", factor, eps, (center,), (point,),
        {"in_sub": True, "in_hub_scaled": False},
        {"in_sub": set_membership(point, center, eps, Model.SUB),
         "in_hub_scaled": set_membership(point, center, c_eps, Model.HUB)}))
    return out


def _lfd_witnesses(factor: float, eps: float) -> List[NoSimulationWitness]:
    c_eps = factor * eps
    centers = (two_point(0.0), two_point(10.0 * eps))
    tv = build_lfds(centers[0], centers[1], eps, Model.TV)
    hub = build_lfds(centers[0], centers[1], eps, Model.HUB)
    sub = build_lfds(centers[0], centers[1], eps, Model.SUB)
    tv_pair = (tv.p_star, tv.q_star)
    hub_pair = (hub.p_star, hub.q_star)
    sub_pair = (sub.p_star, sub.q_star)
    return [
        NoSimulationWitness(
            "tv-lfd-not-in-hub", factor, eps, centers, tv_pair,
            {"closed_form": True, "in_hub_scaled": False},
            {"closed_form": _matches(tv.p_star, [eps, 1 - eps]) and _matches(tv.q_star, [9 * eps, 1 - 9 * eps]),
             "in_hub_scaled": _pair_in(tv_pair, centers, c_eps, Model.HUB)}),
        NoSimulationWitness(
            "tv-lfd-not-in-sub", factor, eps, centers, tv_pair,
            {"closed_form": True, "in_sub_scaled": False},
            {"closed_form": _matches(tv.p_star, [eps, 1 - eps]),
             "in_sub_scaled": _pair_in(tv_pair, centers, c_eps, Model.SUB)}),
        NoSimulationWitness(
            "hub-lfd-not-in-sub", factor, eps, centers, hub_pair,
            {"closed_form": True, "in_sub_scaled": False},
            {"closed_form": (_matches(hub.p_star, [eps, 1 - eps])
                             and _matches(hub.q_star, [10 * eps * (1 - eps), 1 - 10 * eps + 10 * eps ** 2])),
             "in_sub_scaled": _pair_in(hub_pair, centers, c_eps, Model.SUB)}),
        NoSimulationWitness(
            "sub-lfd-not-in-hub", factor, eps, centers, sub_pair,
            {"closed_form": True, "in_hub_scaled": False},
            {"closed_form": (_matches(sub.p_star, [0.0, 1.0])
                             and _matches(sub.q_star, [9 * eps + 10 * eps ** 2, (1 - 10 * eps) * (1 + eps)])),
             "in_hub_scaled": _pair_in(sub_pair, centers, c_eps, Model.HUB)})
    ]


def no_simulation_witnesses(factors: Sequence[float] = DEFAULT_FACTORS, eps: float = 1e-4) -> List[NoSimulationWitness]:
    """Two-point examples showing that no rescaling ``C`` makes one contamination model contain another

    ``eps`` must be small against ``1 / (10 (C + 1))`` for the LFD witnesses.
    """
    witnesses = []
    for factor in factors:
        if not 0.0 < factor * eps < 1.0:
            raise ValueError(f"C * eps must lie in (0, 1), got {factor * eps}")
        witnesses.extend(_single_witnesses(float(factor), eps))
        witnesses.extend(_lfd_witnesses(float(factor), eps))
    for witness in witnesses:
        if not witness.ok:
            logger.warning(f"membership pattern differs: {witness!r} observed {witness.observed}")
    return witnesses


def containment_check(corpus: Sequence[Tuple[Dist, Dist, float]], seed: int = 0) -> Dict[str, int]:
    """Count Huber and subtractive points that escape the TV set of the same level

    For each ``(p, q, eps)`` a random Huber point ``(1 - eps) p + eps r`` and a
    random subtractive point around ``p`` are drawn.
    """
    rng = np.random.default_rng(seed)
    escaped = {"hub": 0, "sub": 0, "checked": 0}
    for p, _, eps in corpus:
        noise = rng.dirichlet(np.ones(p.alphabet_size))
        hub_point = (1.0 - eps) * p.probs + eps * noise
        if not set_membership(hub_point, p, eps, Model.TV):
            escaped["hub"] += 1
        if not set_membership(random_sub_member(p, eps, rng), p, eps, Model.TV):
            escaped["sub"] += 1
        escaped["checked"] += 1
    return escaped
