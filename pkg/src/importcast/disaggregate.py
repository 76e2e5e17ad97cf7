"""Temporal disaggregation of annual series into quarterly series.

Two methods, both average-preserving (each year's four quarters mean to
the annual value, keeping quarterly values at annual magnitude):

``flat``
    Repeats each annual value four times.
``smooth``
    Piecewise-linear interpolation through year-center knots, followed by
    a per-year additive correction that restores the year mean exactly.
    Values driven below zero by the correction are clamped to 0 and the
    correction re-balanced within the year.

The exact procedure behind the upstream data source's disaggregation step
is not publicly documented; these two methods are explicit stand-ins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from importcast.errors import ValidationError
from importcast.ingest import AnnualSeries

METHODS = ("smooth", "flat")

MEAN_TOL = 1e-9  # relative, per year
_REBALANCE_CAP = 100


@dataclass(frozen=True)
class QuarterlySeries:
    """Quarterly values at annual magnitude, 4 per source year."""

    country_code: str
    start: tuple[int, int]  # (year, quarter in 1..4)
    values: np.ndarray

    def __post_init__(self):
        year, quarter = self.start
        if quarter not in (1, 2, 3, 4):
            raise ValidationError(f"quarter must be in 1..4, got {quarter}")
        if len(self.values) % 4 != 0:
            raise ValidationError(
                f"{self.country_code}: quarterly length {len(self.values)} "
                "is not a multiple of 4"
            )

    def __len__(self) -> int:
        return len(self.values)


def year_means(values: np.ndarray) -> np.ndarray:
    """Mean of each consecutive group of four quarters."""
    return np.asarray(values, dtype=float).reshape(-1, 4).mean(axis=1)


def annual_to_quarterly(
    series: AnnualSeries, method: str = "smooth"
) -> QuarterlySeries:
    """Disaggregate one annual series into 4x as many quarterly values."""
    if method not in METHODS:
        raise ValidationError(
            f"unknown disaggregation method {method!r}, expected one of {METHODS}"
        )
    annual = np.asarray(series.values, dtype=float)
    if method == "flat":
        quarterly = np.repeat(annual, 4)
    else:
        quarterly = _smooth(annual, series.country_code)

    _check_mean_preservation(quarterly, annual, series.country_code)
    return QuarterlySeries(
        country_code=series.country_code,
        start=(series.start_year, 1),
        values=quarterly,
    )


def _smooth(annual: np.ndarray, country: str) -> np.ndarray:
    n_years = len(annual)
    if n_years < 2:
        raise ValidationError(
            f"{country}: smooth disaggregation needs at least 2 years "
            f"(no slope defined for {n_years})"
        )
    # Annual value anchored at the center of its year (quarter index 4y+1.5);
    # end segments extend linearly so a globally linear series stays linear.
    t = np.arange(4 * n_years, dtype=float)
    knots = 4.0 * np.arange(n_years) + 1.5
    seg = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, n_years - 2)
    slope = (annual[seg + 1] - annual[seg]) / 4.0
    quarterly = annual[seg] + slope * (t - knots[seg])

    # Interior kinks shift year means off target; restore them additively,
    # then clamp/re-balance any year the correction pushed below zero.
    for y in range(n_years):
        block = quarterly[4 * y : 4 * y + 4]
        block += annual[y] - block.mean()
        if (block < 0).any():
            quarterly[4 * y : 4 * y + 4] = _rebalance(block, annual[y], country)
    return quarterly


def _rebalance(block: np.ndarray, target_mean: float, country: str) -> np.ndarray:
    """Clamp negatives to 0, re-spreading the excess over positive entries."""
    block = block.copy()
    for _ in range(_REBALANCE_CAP):
        if (block >= 0).all():
            return block
        block = np.clip(block, 0.0, None)
        free = block > 0
        excess = block.sum() - 4.0 * target_mean
        if not free.any() or excess <= 0:
            return block
        block[free] -= excess / free.sum()
    raise ValidationError(
        f"{country}: clamp re-balance did not converge in {_REBALANCE_CAP} "
        "iterations"
    )


def _check_mean_preservation(
    quarterly: np.ndarray, annual: np.ndarray, country: str
) -> None:
    means = year_means(quarterly)
    scale = np.maximum(1.0, np.abs(annual))
    bad = np.abs(means - annual) > MEAN_TOL * scale
    if bad.any():
        y = int(np.argmax(bad))
        raise ValidationError(
            f"{country}: year {y} mean {means[y]!r} differs from annual "
            f"value {annual[y]!r} beyond tolerance"
        )


def quarterly_csv_rows(series: QuarterlySeries) -> list[tuple[str, int, int, float]]:
    """Rows for the ``country,year,quarter,value`` dump format."""
    year, quarter = series.start
    rows = []
    for v in series.values:
        rows.append((series.country_code, year, quarter, float(v)))
        quarter += 1
        if quarter == 5:
            quarter = 1
            year += 1
    return rows
