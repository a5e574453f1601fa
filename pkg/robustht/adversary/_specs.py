# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

from robustht._error import MembershipError
from robustht.config import DEFAULT_TIE_RANDOMIZATION
from robustht.dist import Dist, Model, set_membership

__all__ = (
    "AdversaryModel",
    "Strategy",
    "TestKind",
    "AdversarySpec",
    "TestSpec"
)


class AdversaryModel(str, Enum):
    """Oblivious and adaptive contamination models

    Adaptive adversaries see the realized dataset: ``a-tv`` replaces,
    ``a-hub`` appends and ``a-sub`` deletes ``floor(n * eps)`` samples.
    """
    HUB = "hub"
    TV = "tv"
    SUB = "sub"
    A_HUB = "a-hub"
    A_TV = "a-tv"
    A_SUB = "a-sub"

    @classmethod
    def parse(cls, value: Union[str, "AdversaryModel"]) -> "AdversaryModel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown adversary model: {value!r}") from None

    @property
    def adaptive(self) -> bool:
        return self.value.startswith("a-")

    @property
    def base(self) -> Model:
        """:class:`Model`: The oblivious model with the same budget shape"""
        return Model(self.value[2:] if self.adaptive else self.value)


class Strategy(str, Enum):
    LFD_SAMPLER = "lfd-sampler"
    FIXED_DIST = "fixed-dist"
    GREEDY_ADAPTIVE = "greedy-adaptive"


class TestKind(str, Enum):
    __test__ = False
    CLIPPED_LR = "clipped-lr"
    SCHEFFE = "scheffe"
    H_STAT = "h-stat"


class AdversarySpec:
    """This object shows a contamination adversary

    Attributes
    ----------
        model: :class:`AdversaryModel`
            Contamination model.
        eps: :obj:`float`
            Contamination level.
        strategy: :class:`Strategy`
            How corrupted data is produced.
        fixed: :obj:`tuple` of :class:`Dist`, optional
            ``(P', Q')`` served under each hypothesis by ``fixed-dist``.
    """
    __slots__ = (
        "model",
        "eps",
        "strategy",
        "fixed"
    )

    def __init__(self, model: Union[AdversaryModel, str], eps: float, strategy: Union[Strategy, str, None] = None,
                 fixed: Optional[Tuple[Dist, Dist]] = None) -> None:
        self.model = AdversaryModel.parse(model)
        if strategy is None:
            strategy = Strategy.GREEDY_ADAPTIVE if self.model.adaptive else Strategy.LFD_SAMPLER
        self.strategy = Strategy(strategy)
        self.eps = float(eps)
        self.fixed = fixed
        if not 0.0 <= self.eps < 1.0:
            raise ValueError(f"eps must lie in [0, 1), got {eps}")
        if (self.strategy is Strategy.GREEDY_ADAPTIVE) != self.model.adaptive:
            raise ValueError(f"strategy {self.strategy.value} does not fit model {self.model.value}")
        if self.strategy is Strategy.FIXED_DIST and fixed is None:
            raise ValueError("fixed-dist strategy needs the pair of served distributions")

    def validate(self, p: Dist, q: Dist) -> None:
        """Check that fixed distributions lie in the uncertainty sets around ``p`` and ``q``"""
        if self.strategy is not Strategy.FIXED_DIST:
            return
        for name, served, center in (("P'", self.fixed[0], p), ("Q'", self.fixed[1], q)):
            if not set_membership(served, center, self.eps, self.model.base):
                raise MembershipError(f"{name} is outside the {self.model.value} set of radius {self.eps}")

    def to_json(self) -> Dict[str, Any]:
        data = {"model": self.model.value, "eps": self.eps, "strategy": self.strategy.value}
        if self.fixed is not None:
            data["fixed"] = [self.fixed[0].to_json(), self.fixed[1].to_json()]
        return data

    def __repr__(self) -> str:
        return f"AdversarySpec(model={self.model.value!r}, eps={self.eps!r}, strategy={self.strategy.value!r})"


class TestSpec:
    """This object shows a test to run on (possibly corrupted) samples

    Attributes
    ----------
        kind: :class:`TestKind`
            Statistic used.
        calibration: :obj:`tuple`, optional
            ``(model, eps)`` the clipped likelihood ratio is built for; ``None``
            means the plain likelihood ratio of the nominal pair.
        threshold: :obj:`float`, optional
            Decision threshold in the statistic's own units; ``None`` picks 0 for
            the likelihood ratio and the midpoint of the two means otherwise.
        tie_randomization: :obj:`float`
            Probability of deciding ``p`` when the statistic equals the threshold.
    """
    __test__ = False
    __slots__ = (
        "kind",
        "calibration",
        "threshold",
        "tie_randomization"
    )

    def __init__(self, kind: Union[TestKind, str], calibration: Optional[Tuple[Union[Model, str], float]] = None,
                 threshold: Optional[float] = None, tie_randomization: float = DEFAULT_TIE_RANDOMIZATION) -> None:
        self.kind = TestKind(kind)
        self.calibration = None if calibration is None else (Model.parse(calibration[0]), float(calibration[1]))
        self.threshold = threshold
        self.tie_randomization = float(tie_randomization)
        if not 0.0 <= self.tie_randomization <= 1.0:
            raise ValueError("tie_randomization must lie in [0, 1]")
        if self.calibration is not None and self.kind is not TestKind.CLIPPED_LR:
            raise ValueError("only the clipped likelihood-ratio test takes a calibration")

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "calibration": None if self.calibration is None else [self.calibration[0].value, self.calibration[1]],
            "threshold": self.threshold,
            "tie_randomization": self.tie_randomization
        }

    def __repr__(self) -> str:
        return f"TestSpec(kind={self.kind.value!r}, calibration={self.calibration!r})"
