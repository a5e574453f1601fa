# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

from ._exact import compositions, state_count, product_tv, product_tv_curve, exact_sample_complexity
from ._estimate import (
    ComplexityEstimate,
    predicted_sample_complexity,
    robust_complexity,
    complexity_curve,
    hellinger_band,
    tv_corridor
)
from ._privacy import d_gamma, PrivacyCurve, privacy_curves

__all__ = (
    "compositions",
    "state_count",
    "product_tv",
    "product_tv_curve",
    "exact_sample_complexity",
    "ComplexityEstimate",
    "predicted_sample_complexity",
    "robust_complexity",
    "complexity_curve",
    "hellinger_band",
    "tv_corridor",
    "d_gamma",
    "PrivacyCurve",
    "privacy_curves"
)
