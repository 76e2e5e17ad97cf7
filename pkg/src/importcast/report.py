"""Per-country experiment reports and their file emission.

Every run produces, per country: an MSE/MAE metrics table (with published
reference errors beside computed values when available), the per-epoch
loss trace, train/test fit pairs (which double as regression scatter
data), and the reported forecast slice. Numeric cells are written with
repr so files re-parse to the exact in-memory floats.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from importcast.errors import ValidationError
from importcast.forecast import ForecastResult
from importcast.reference import reference_errors
from importcast.scaling import ScalerParams
from importcast.training import TrainTrace


def regression_coefficient(preds, targets) -> float:
    """Pearson correlation between model outputs and target values."""
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape or preds.size < 2:
        raise ValidationError(
            f"correlation needs equal lengths >= 2, got {preds.shape} vs "
            f"{targets.shape}"
        )
    dp = preds - preds.mean()
    dt = targets - targets.mean()
    denom = float(np.sqrt((dp * dp).sum() * (dt * dt).sum()))
    if denom == 0.0:
        raise ValidationError(
            "correlation undefined: predictions or targets are constant"
        )
    return float((dp * dt).sum() / denom)


@dataclass
class ExperimentReport:
    """Everything reported for one country, plus config echo."""

    country_code: str
    train_mse: float
    train_mae: float
    test_mse: float
    test_mae: float
    regression_all: float
    regression_train: float
    regression_test: float
    forecast_full: ForecastResult  # entire recursive horizon, for audit
    forecast_report: ForecastResult  # the reported slice
    scaler: ScalerParams
    best_epoch: int
    trace: TrainTrace
    fit_train: tuple[np.ndarray, np.ndarray]  # (targets, predictions)
    fit_test: tuple[np.ndarray, np.ndarray]
    config_echo: dict

    def __post_init__(self):
        for name in ("train_mse", "train_mae", "test_mse", "test_mae"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        for name in ("regression_all", "regression_train", "regression_test"):
            r = getattr(self, name)
            if not -1.0 <= r <= 1.0 + 1e-12:
                raise ValidationError(f"{name}={r} outside [-1, 1]")

    @property
    def regression_coefficient(self) -> float:
        """Headline fit-quality number: correlation over all samples."""
        return self.regression_all


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cell(value) -> str:
    return repr(float(value))


def emit_report(report: ExperimentReport, out_dir) -> dict[str, Path]:
    """Write one country's file bundle under out_dir/<country>/."""
    country_dir = Path(out_dir) / report.country_code
    country_dir.mkdir(parents=True, exist_ok=True)
    paths = {}

    reference = reference_errors(report.country_code)
    header = ["country", "split", "mse", "mae"]
    rows = [
        [report.country_code, "train", _cell(report.train_mse), _cell(report.train_mae)],
        [report.country_code, "test", _cell(report.test_mse), _cell(report.test_mae)],
    ]
    if reference is not None:
        header += ["reference_mse", "reference_mae"]
        rows[0] += [_cell(reference[0]), _cell(reference[1])]
        rows[1] += [_cell(reference[2]), _cell(reference[3])]
    paths["metrics"] = country_dir / "metrics.csv"
    _write_csv(paths["metrics"], header, rows)

    paths["trace"] = country_dir / "trace.csv"
    trace = report.trace
    _write_csv(
        paths["trace"],
        ["epoch", "train_mse", "train_mae", "test_mse", "test_mae"],
        (
            [
                str(epoch + 1),
                _cell(trace.train_mse[epoch]),
                _cell(trace.train_mae[epoch]),
                _cell(trace.test_mse[epoch]),
                _cell(trace.test_mae[epoch]),
            ]
            for epoch in range(len(trace.train_mse))
        ),
    )

    for split in ("train", "test"):
        targets, preds = getattr(report, f"fit_{split}")
        paths[f"fit_{split}"] = country_dir / f"fit_{split}.csv"
        _write_csv(
            paths[f"fit_{split}"],
            ["index", "target", "prediction"],
            (
                [str(i), _cell(t), _cell(p)]
                for i, (t, p) in enumerate(zip(targets, preds))
            ),
        )

    fc = report.forecast_report
    paths["forecast"] = country_dir / "forecast.csv"
    _write_csv(
        paths["forecast"],
        ["quarter", "value_usd", "value_normalized"],
        (
            [label, _cell(usd), _cell(norm)]
            for label, usd, norm in zip(
                fc.labels(), fc.values_usd, fc.values_normalized
            )
        ),
    )
    return paths


def report_as_dict(report: ExperimentReport) -> dict:
    """JSON-ready view of a report, full forecast horizon included."""
    fc_full = report.forecast_full
    fc_rep = report.forecast_report
    payload = {
        "country": report.country_code,
        "train_mse": report.train_mse,
        "train_mae": report.train_mae,
        "test_mse": report.test_mse,
        "test_mae": report.test_mae,
        "regression_all": report.regression_all,
        "regression_train": report.regression_train,
        "regression_test": report.regression_test,
        "best_epoch": report.best_epoch,
        "scaler": {"min": report.scaler.min_value, "max": report.scaler.max_value},
        "forecast_full": {
            "start": list(fc_full.horizon_start),
            "quarters": fc_full.labels(),
            "values_usd": list(fc_full.values_usd),
            "values_normalized": list(fc_full.values_normalized),
            "floored": fc_full.floored,
        },
        "forecast_report": {
            "start": list(fc_rep.horizon_start),
            "quarters": fc_rep.labels(),
            "values_usd": list(fc_rep.values_usd),
        },
        "config": report.config_echo,
    }
    reference = reference_errors(report.country_code)
    if reference is not None:
        payload["reference"] = {
            "train_mse": reference[0],
            "train_mae": reference[1],
            "test_mse": reference[2],
            "test_mae": reference[3],
        }
    return payload
