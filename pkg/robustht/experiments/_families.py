# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from robustht.config import CORPUS_ALPHABETS
from robustht.dist import Dist, Model, tv_distance
from robustht.lfd import build_lfds

__all__ = (
    "JumpFamilyInstance",
    "jump_pair",
    "witness_pair",
    "two_point",
    "privacy_example_pair",
    "dirichlet_corpus",
    "random_sub_member"
)

T_LIMITS = {Model.TV: 0.5, Model.HUB: 0.5, Model.SUB: 1.0}
# the under-calibrated test only breaks for smaller perturbation exponents
BREAKDOWN_T_LIMITS = {Model.TV: 1.0 / 3.0, Model.HUB: 0.5, Model.SUB: 1.0}


def jump_pair(eps: float) -> Tuple[Dist, Dist]:
    """``p = (1/2 - 10 eps, 1/2 + 8 eps, 2 eps)``, ``q = (1/2, 1/2, 0)``"""
    if not 0.0 < eps <= 0.05:
        raise ValueError(f"jump family needs 0 < eps <= 0.05, got {eps}")
    return Dist([0.5 - 10 * eps, 0.5 + 8 * eps, 2 * eps]), Dist([0.5, 0.5, 0.0])


class JumpFamilyInstance:
    """This object shows one member of the jump family with its two contamination levels

    Attributes
    ----------
        eps: :obj:`float`
            Family parameter.
        t: :obj:`float`
            Exponent of the perturbation ``eps ** (1 + t)``.
        model: :class:`Model`
            Contamination model.
        p, q: :class:`Dist`
            The pair.
        eps1, eps2: :obj:`float`
            Perturbed and critical contamination levels.
    """
    __slots__ = (
        "eps",
        "t",
        "model",
        "p",
        "q",
        "eps1",
        "eps2"
    )

    def __init__(self, eps: float, t: float, model: Union[Model, str]) -> None:
        self.model = Model.parse(model)
        self.eps = float(eps)
        self.t = float(t)
        if not 0.0 < self.t < T_LIMITS[self.model]:
            raise ValueError(f"t must lie in (0, {T_LIMITS[self.model]}) for {self.model.value}")
        self.p, self.q = jump_pair(self.eps)
        if self.model is Model.TV:
            self.eps2 = self.eps
        elif self.model is Model.HUB:
            self.eps2 = 2 * self.eps / (1 + 2 * self.eps)
        else:
            self.eps2 = 2 * self.eps / (1 - 2 * self.eps)
        self.eps1 = self.eps2 - self.eps ** (1 + self.t)
        if not 0.0 < self.eps1 < self.eps2 <= tv_distance(self.p, self.q) / 4:
            raise ValueError(f"eps={eps} is too large for the jump construction")

    def to_json(self) -> Dict[str, Any]:
        return {"eps": self.eps, "t": self.t, "model": self.model.value, "eps1": self.eps1, "eps2": self.eps2}


def witness_pair(eps: float, model: Union[Model, str]) -> Tuple[Dist, Dist]:
    """A pair inside the critical-level uncertainty sets that gives symbol 3 equal mass.

    Its Hellinger divergence upper-bounds that of the least favourable pair.
    """
    model = Model.parse(model)
    instance = JumpFamilyInstance(eps, 0.25, model)
    p, e2 = instance.p, instance.eps2
    if model is Model.TV:
        return (Dist([0.5 - 9 * eps, 0.5 + 8 * eps, eps]),
                Dist([0.5 - eps, 0.5, eps]))
    if model is Model.HUB:
        return (Dist([(1 - e2) * p[0] + e2, (1 - e2) * p[1], (1 - e2) * p[2]]),
                Dist([(1 - e2) / 2, (1 - e2) / 2, e2]))
    lfds = build_lfds(instance.p, instance.q, e2, model)
    return lfds.p_star, lfds.q_star


def two_point(a: float) -> Dist:
    return Dist([a, 1.0 - a])


def privacy_example_pair(alpha: float) -> Tuple[Dist, Dist]:
    """``p = (0, 1/2, 1/2)``, ``q = (2 a^1.5, 1/2 + a - a^1.5, 1/2 - a - a^1.5)``"""
    if not 0.0 < alpha < 0.25:
        raise ValueError("alpha must lie in (0, 0.25)")
    a15 = alpha ** 1.5
    return Dist([0.0, 0.5, 0.5]), Dist([2 * a15, 0.5 + alpha - a15, 0.5 - alpha - a15])


def dirichlet_corpus(size: int, seed: int, alphabets: Tuple[int, int] = CORPUS_ALPHABETS,
                     eps_fraction: float = 0.25) -> List[Tuple[Dist, Dist, float]]:
    """Random ``(p, q, eps)`` with flat Dirichlet pairs and ``eps`` uniform in ``(0, fraction * tv]``"""
    rng = np.random.default_rng(seed)
    corpus = []
    while len(corpus) < size:
        k = int(rng.integers(alphabets[0], alphabets[1] + 1))
        p = Dist(rng.dirichlet(np.ones(k)), normalize=True)
        q = Dist(rng.dirichlet(np.ones(k)), normalize=True)
        tv = tv_distance(p, q)
        if tv < 1e-3:
            continue
        eps = eps_fraction * tv * (1.0 - rng.random())
        corpus.append((p, q, float(eps)))
    return corpus


def random_sub_member(p: Dist, eps: float, rng: np.random.Generator, attempts: int = 1000) -> Dist:
    """A random point of the subtractive set: ``p`` reweighted by retention probabilities"""
    kappa = eps / (1.0 + eps)
    for _ in range(attempts):
        u = rng.random(p.alphabet_size)
        weight = float(np.dot(p.probs, u))
        if weight <= 0:
            continue
        scale = kappa / weight
        if scale * u.max() > 1.0:
            continue
        retention = 1.0 - scale * u
        return Dist((1.0 + eps) * p.probs * retention, normalize=True)
    raise ValueError("could not draw a subtractive point; eps too large for this p")
