# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
from typing import Union

from robustht._error import MembershipError
from robustht.dist import Dist, Model, set_membership

__all__ = (
    "nearest_inner_point",
)


def nearest_inner_point(p_eps: Dist, center: Dist, eps: float, eps0: float, model: Union[Model, str]) -> Dist:
    """Move a point of the ``eps`` set into the ``eps0`` set by at most ``eps - eps0`` in TV

    TV and Sub shrink towards ``center`` along the segment; Huber keeps the
    contaminating component and lowers its weight to ``eps0``.
    """
    model = Model.parse(model)
    if not 0.0 <= eps0 <= eps:
        raise ValueError(f"need 0 <= eps0 <= eps, got eps0={eps0}, eps={eps}")
    if not set_membership(p_eps, center, eps, model):
        raise MembershipError(f"point is not in the {model.value} set of radius {eps}")
    if eps0 == eps:
        return p_eps

    point, base = p_eps.probs, center.probs
    if model is Model.HUB:
        component = (point - (1.0 - eps) * base) / eps
        result = (1.0 - eps0) * base + eps0 * component
    else:
        weight = eps0 / eps
        result = weight * point + (1.0 - weight) * base
    return Dist(result, normalize=True)
