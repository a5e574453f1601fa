# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.
from __future__ import annotations
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from robustht._error import ConditionNotMet, InvariantViolation
from robustht.adversary import TestKind, TestSpec, TrialReport, run_oblivious_trial
from robustht.config import (
    BREAKDOWN_SCAN_START,
    BREAKDOWN_SCAN_STOP,
    BREAKDOWN_Z_GRID,
    DEFAULT_TRIALS
)
from robustht.dist import Dist, Model
from robustht.lfd import build_lfds, clipped_log_ratios
from ._families import BREAKDOWN_T_LIMITS, JumpFamilyInstance, witness_pair

__all__ = (
    "BreakdownResult",
    "breakdown_expectation",
    "breakdown_experiment",
    "breakdown_onset_scan"
)

logger = logging.getLogger(__name__)


def _check_t(model: Model, t: float) -> None:
    if not 0.0 < t < BREAKDOWN_T_LIMITS[model]:
        raise ValueError(f"breakdown needs t in (0, {BREAKDOWN_T_LIMITS[model]:.4g}) for {model.value}, got {t}")


def _opposing(instance: JumpFamilyInstance) -> Tuple[Dist, str, int]:
    """Data source at the critical level, the side it plays and the sign that breaks the test

    For TV and Hub this is the closed-form :func:`witness_pair` at ``eps2``, which
    gives the jump symbol equal mass under both sides, not the LFD calibrated at
    ``eps2``. For Sub the witness is the ``eps2`` LFD itself.
    """
    p2, q2 = witness_pair(instance.eps, instance.model)
    if instance.model is Model.SUB:
        return p2, "p", -1
    return q2, "q", 1


def breakdown_expectation(instance: JumpFamilyInstance) -> Dict[str, Any]:
    """Exact mean and standard deviation of one clipped log-likelihood term

    The statistic is calibrated at ``eps1`` and the sample comes from the
    critical-level distribution of the opposite hypothesis. Symbols without mass
    contribute nothing, including those with infinite scores.
    """
    _check_t(instance.model, instance.t)
    lfds = build_lfds(instance.p, instance.q, instance.eps1, instance.model)
    scores = clipped_log_ratios(lfds)
    source, side, sign = _opposing(instance)
    weights = source.probs
    live = weights > 0
    if np.any(np.isnan(scores[live])):
        raise InvariantViolation("the critical-level source charges a symbol outside both supports")
    values = scores[live]
    if np.all(np.isfinite(values)):
        mean = math.fsum(weights[live] * values)
        second = math.fsum(weights[live] * values ** 2)
        sd = math.sqrt(max(second - mean * mean, 0.0))
    else:
        finite = np.isfinite(values)
        mean = math.inf if np.any(values[~finite] > 0) else -math.inf
        sd = 0.0
    return {
        "mean": mean,
        "sd": sd,
        "side": side,
        "expected_sign": sign,
        "sign_ok": mean * sign > 0,
        "source": source
    }


class BreakdownResult:
    """This object shows a breakdown run: the exact drift and the Monte Carlo error curve

    Attributes
    ----------
        instance: :class:`JumpFamilyInstance`
        expected_z: :obj:`float`
            Mean per-sample statistic under the opposing critical-level source.
        sd_z: :obj:`float`
            Its standard deviation.
        side: :obj:`str`
            ``"q"`` when the type-II error breaks down, ``"p"`` for type I.
        reports: :obj:`list` of :class:`TrialReport`
            One report per sample size, increasing.
        overestimation: :class:`TrialReport`, optional
            The test calibrated at ``eps2`` against the ``eps1`` least favourable pair,
            at the largest sample size.
    """
    __slots__ = (
        "instance",
        "expected_z",
        "sd_z",
        "side",
        "reports",
        "overestimation"
    )

    def __init__(self, instance: JumpFamilyInstance, expected_z: float, sd_z: float, side: str,
                 reports: List[TrialReport], overestimation: Optional[TrialReport] = None) -> None:
        self.instance = instance
        self.expected_z = expected_z
        self.sd_z = sd_z
        self.side = side
        self.reports = reports
        self.overestimation = overestimation

    def _error(self, report: TrialReport) -> float:
        return report.type2 if self.side == "q" else report.type1

    @property
    def error_curve(self) -> List[Tuple[int, float]]:
        return [(report.n, self._error(report)) for report in self.reports]

    @property
    def final_error(self) -> float:
        return self._error(self.reports[-1])

    @property
    def overestimation_error(self) -> Optional[float]:
        return None if self.overestimation is None else self._error(self.overestimation)

    def csv_rows(self) -> List[List[Any]]:
        return [[n, error, self.ci_for(n)] for n, error in self.error_curve]

    def ci_for(self, n: int) -> float:
        index = 1 if self.side == "q" else 0
        return next(report.ci_radius[index] for report in self.reports if report.n == n)

    def to_json(self) -> Dict[str, Any]:
        return {
            "instance": self.instance.to_json(),
            "expected_z": self.expected_z,
            "sd_z": self.sd_z,
            "side": self.side,
            "error_curve": [{"n": n, "error": error} for n, error in self.error_curve],
            "final_error": self.final_error,
            "overestimation_error": self.overestimation_error,
            "reports": [report.to_json() for report in self.reports]
        }


def breakdown_experiment(eps: float, t: float, model: Union[Model, str], trials: int = DEFAULT_TRIALS,
                         seed: int = 0, z_grid: Sequence[float] = BREAKDOWN_Z_GRID,
                         n_grid: Optional[Sequence[int]] = None, jobs: Optional[int] = 1) -> BreakdownResult:
    """Show that the test calibrated at ``eps1`` fails against an adversary at ``eps2``

    Sample sizes default to ``(z * sd / mean) ** 2`` for each ``z``, where the
    drift of the summed statistic is ``z`` standard deviations to the wrong side.

    Samples are drawn from :func:`witness_pair` at ``eps2``. For TV and Hub that is
    a closed-form pair neutralizing the jump symbol, not the ``eps2`` LFDs; for Sub
    it is the ``eps2`` LFD pair.

    Raises
    ------
        :class:`ConditionNotMet`
            The exact mean does not have the breaking sign at this ``eps``.
        :obj:`ValueError`
            ``t`` is outside the breakdown range of ``model``: ``(0, 1/3)`` for TV,
            ``(0, 1/2)`` for Hub and ``(0, 1)`` for Sub.
    """
    instance = JumpFamilyInstance(eps, t, model)
    exact = breakdown_expectation(instance)
    if not exact["sign_ok"]:
        raise ConditionNotMet(f"{instance.model.value} at eps={eps}, t={t}: mean statistic {exact['mean']!r} "
                              f"does not have sign {exact['expected_sign']:+d}")
    mean, sd = exact["mean"], exact["sd"]
    if n_grid is None:
        if math.isfinite(mean) and sd > 0:
            n_grid = sorted({max(1, math.ceil((z * sd / abs(mean)) ** 2)) for z in z_grid})
        else:
            n_grid = [1]
    logger.info(f"breakdown {instance.model.value} eps={eps:g} t={t:g}: mean {mean:.3e}, sd {sd:.3e}, n {list(n_grid)}")

    p2, q2 = witness_pair(instance.eps, instance.model)
    under = TestSpec(TestKind.CLIPPED_LR, calibration=(instance.model, instance.eps1))
    reports = [run_oblivious_trial(p2, q2, under, int(n), trials, seed, nominal=(instance.p, instance.q), jobs=jobs)
               for n in n_grid]

    robust = build_lfds(instance.p, instance.q, instance.eps1, instance.model)
    over = TestSpec(TestKind.CLIPPED_LR, calibration=(instance.model, instance.eps2))
    overestimation = run_oblivious_trial(robust.p_star, robust.q_star, over, int(n_grid[-1]), trials, seed,
                                         nominal=(instance.p, instance.q), jobs=jobs)
    return BreakdownResult(instance, mean, sd, exact["side"], reports, overestimation)


def breakdown_onset_scan(t: float, model: Union[Model, str], start: float = BREAKDOWN_SCAN_START,
                         stop: float = BREAKDOWN_SCAN_STOP) -> Dict[str, Any]:
    """Scan ``eps`` downward by factors of ``sqrt(10)`` and report where the breaking sign first holds"""
    model = Model.parse(model)
    _check_t(model, t)
    rows = []
    onset = None
    eps = start
    while eps >= stop * (1 - 1e-9):
        try:
            exact = breakdown_expectation(JumpFamilyInstance(eps, t, model))
        except ValueError as exc:
            logger.warning(f"onset scan skipped eps={eps:g}: {exc}")
            eps /= math.sqrt(10.0)
            continue
        rows.append({"eps": eps, "mean": exact["mean"], "sign_ok": exact["sign_ok"]})
        if exact["sign_ok"] and onset is None:
            onset = eps
        elif not exact["sign_ok"]:
            logger.warning(f"{model.value} t={t:g}: breaking sign misses at eps={eps:g}")
        eps /= math.sqrt(10.0)
    return {"model": model.value, "t": t, "onset": onset, "rows": rows}
