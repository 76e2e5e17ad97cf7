"""Supervised (lookback window -> next value) pairs with a 75/25 split.

The split is chronological over windowed samples: the first 75% of the
(input, target) pairs train, the remainder test. Test windows never see
values at or beyond their own target index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from importcast.errors import ValidationError

TRAIN_FRACTION = 0.75


@dataclass(frozen=True)
class WindowedDataset:
    lookback: int
    inputs: np.ndarray  # (n_samples, lookback)
    targets: np.ndarray  # (n_samples,)
    split_index: int  # first test sample

    @property
    def n_samples(self) -> int:
        return len(self.targets)

    @property
    def n_train(self) -> int:
        return self.split_index

    @property
    def n_test(self) -> int:
        return self.n_samples - self.split_index

    @property
    def train_inputs(self) -> np.ndarray:
        return self.inputs[: self.split_index]

    @property
    def train_targets(self) -> np.ndarray:
        return self.targets[: self.split_index]

    @property
    def test_inputs(self) -> np.ndarray:
        return self.inputs[self.split_index :]

    @property
    def test_targets(self) -> np.ndarray:
        return self.targets[self.split_index :]


def make_windows(series, lookback: int) -> WindowedDataset:
    """Slide a length-`lookback` window over the series.

    inputs[i] = series[i : i+L], targets[i] = series[i+L]; the series must
    be longer than L so at least one sample exists (training separately
    requires 8+ train samples).
    """
    series = np.asarray(series, dtype=float)
    if lookback < 1:
        raise ValidationError(f"lookback must be >= 1, got {lookback}")
    if len(series) <= lookback:
        raise ValidationError(
            f"series of length {len(series)} too short for lookback "
            f"{lookback}; need at least {lookback + 1} points"
        )
    n = len(series) - lookback
    inputs = np.empty((n, lookback), dtype=float)
    for i in range(n):
        inputs[i] = series[i : i + lookback]
    targets = series[lookback:].copy()
    split_index = math.floor(TRAIN_FRACTION * n)
    return WindowedDataset(
        lookback=lookback, inputs=inputs, targets=targets, split_index=split_index
    )


def split_boundary(series_length: int, lookback: int) -> int:
    """Index of the first series value that belongs to the test portion.

    Values before the boundary are the ones training windows and targets
    touch; scalers must be fit on exactly this prefix to avoid leaking the
    future.
    """
    n = series_length - lookback
    if n < 1:
        raise ValidationError(
            f"series of length {series_length} too short for lookback {lookback}"
        )
    return math.floor(TRAIN_FRACTION * n) + lookback
