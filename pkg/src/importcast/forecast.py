"""Recursive multi-step forecasting and calendar arithmetic.

The trained model is a one-step predictor, so multi-step horizons are
produced by feeding each prediction back into the window. Forecasts are
made on the normalized scale and denormalized for reporting; negative
dollar values are floored at 0 (imports cannot be negative) with a flag
recording that flooring happened.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from importcast.errors import NumericError, ValidationError
from importcast.lstm import LstmParams, predict_batch
from importcast.scaling import ScalerParams, inverse_transform

YearQuarter = tuple[int, int]


def quarter_index(yq: YearQuarter) -> int:
    year, quarter = yq
    if quarter not in (1, 2, 3, 4):
        raise ValidationError(f"quarter must be in 1..4, got {quarter}")
    return 4 * year + (quarter - 1)


def add_quarters(yq: YearQuarter, k: int) -> YearQuarter:
    idx = quarter_index(yq) + k
    return idx // 4, idx % 4 + 1


def quarter_label(yq: YearQuarter) -> str:
    return f"{yq[0]}q{yq[1]}"


def parse_quarter_label(label: str) -> YearQuarter:
    try:
        year_s, quarter_s = label.lower().split("q")
        yq = (int(year_s), int(quarter_s))
        quarter_index(yq)  # range check
        return yq
    except (ValueError, ValidationError):
        raise ValidationError(
            f"bad quarter label {label!r}, expected e.g. '2021q1'"
        )


@dataclass(frozen=True)
class ForecastResult:
    country_code: str
    horizon_start: YearQuarter
    values_normalized: tuple[float, ...]
    values_usd: tuple[float, ...]
    floored: bool = False

    def __post_init__(self):
        if len(self.values_normalized) != len(self.values_usd):
            raise ValidationError(
                "normalized and US$ forecast lengths differ: "
                f"{len(self.values_normalized)} vs {len(self.values_usd)}"
            )

    def __len__(self) -> int:
        return len(self.values_usd)

    @property
    def horizon_end(self) -> YearQuarter:
        return add_quarters(self.horizon_start, len(self) - 1)

    def labels(self) -> list[str]:
        return [
            quarter_label(add_quarters(self.horizon_start, k))
            for k in range(len(self))
        ]


def roll_forward(
    step_fn: Callable[[np.ndarray], float], seed_window, steps: int
) -> np.ndarray:
    """Iterate a one-step predictor: append each prediction, slide by one."""
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    window = np.asarray(seed_window, dtype=float).copy()
    if window.ndim != 1 or window.size == 0:
        raise ValidationError("seed window must be a non-empty vector")
    out = np.empty(steps)
    for k in range(steps):
        pred = float(step_fn(window))
        if np.isnan(pred):
            raise NumericError(f"NaN forecast at step {k}")
        out[k] = pred
        window[:-1] = window[1:]
        window[-1] = pred
    return out


def recursive_forecast(
    params: LstmParams,
    scaler: ScalerParams,
    seed_window,
    steps: int,
    candidate_mode: str = "sigmoid",
    country_code: str = "UNK",
    horizon_start: YearQuarter = (0, 1),
    backend=None,
) -> ForecastResult:
    """Roll the model forward `steps` quarters from the last observations.

    seed_window holds the final lookback-many normalized values of the
    series; horizon_start is the quarter right after the series ends.
    """

    def step(window: np.ndarray) -> float:
        return float(
            predict_batch(params, window[None, :], candidate_mode, backend=backend)[0]
        )

    normalized = roll_forward(step, seed_window, steps)
    usd = np.asarray(inverse_transform(scaler, normalized), dtype=float)
    floored = bool((usd < 0).any())
    if floored:
        usd = np.clip(usd, 0.0, None)
    return ForecastResult(
        country_code=country_code,
        horizon_start=horizon_start,
        values_normalized=tuple(float(v) for v in normalized),
        values_usd=tuple(float(v) for v in usd),
        floored=floored,
    )


def horizon_slice(
    result: ForecastResult, start: YearQuarter, end: YearQuarter
) -> ForecastResult:
    """Sub-forecast covering [start, end], both quarters inclusive."""
    lo = quarter_index(start) - quarter_index(result.horizon_start)
    hi = quarter_index(end) - quarter_index(result.horizon_start)
    if lo > hi:
        raise ValidationError(
            f"empty slice: {quarter_label(start)} after {quarter_label(end)}"
        )
    if lo < 0 or hi >= len(result):
        raise ValidationError(
            f"slice {quarter_label(start)}..{quarter_label(end)} outside "
            f"forecast span {quarter_label(result.horizon_start)}.."
            f"{quarter_label(result.horizon_end)}"
        )
    return replace(
        result,
        horizon_start=start,
        values_normalized=result.values_normalized[lo : hi + 1],
        values_usd=result.values_usd[lo : hi + 1],
    )
