"""Min-max normalization with exact inversion.

Scalers are fit on the training portion of a series only, then applied to
test and forecast values; out-of-range inputs map linearly outside [0, 1]
without error (recursive forecasts may leave the training range).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from importcast.errors import ValidationError


@dataclass(frozen=True)
class ScalerParams:
    min_value: float
    max_value: float

    def __post_init__(self):
        if not self.max_value > self.min_value:
            raise ValidationError(
                f"degenerate scaler: max {self.max_value} <= min {self.min_value}"
            )

    @property
    def span(self) -> float:
        return self.max_value - self.min_value


def fit_minmax(values) -> ScalerParams:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValidationError("cannot fit scaler on an empty list")
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        raise ValidationError(
            f"degenerate scaler: all {values.size} values equal {lo}"
        )
    return ScalerParams(min_value=lo, max_value=hi)


def transform(params: ScalerParams, x):
    """(x - min) / (max - min); array-valued inputs map elementwise."""
    z = (np.asarray(x, dtype=float) - params.min_value) / params.span
    return float(z) if z.ndim == 0 else z


def inverse_transform(params: ScalerParams, z):
    """z * (max - min) + min; exact inverse of transform."""
    x = np.asarray(z, dtype=float) * params.span + params.min_value
    return float(x) if x.ndim == 0 else x
