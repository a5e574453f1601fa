# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

from ._clips import ClipPair, calibration_target, calibration_residual, solve_clips
from ._lfdpair import LfdPair, build_lfds, build_lfds_uncalibrated, clipped_log_ratios
from ._inner import nearest_inner_point

__all__ = (
    "ClipPair",
    "calibration_target",
    "calibration_residual",
    "solve_clips",
    "LfdPair",
    "build_lfds",
    "build_lfds_uncalibrated",
    "clipped_log_ratios",
    "nearest_inner_point"
)
