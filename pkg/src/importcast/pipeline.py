"""End-to-end experiment runner.

Per country: ingest -> disaggregate -> fit scaler on the training prefix
-> window -> train -> recursive forecast -> report files. Countries run
independently (optionally in parallel); one country's failure never blocks
or corrupts another's outputs, and the summary records every failure.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from importcast.config import ExperimentConfig
from importcast.disaggregate import annual_to_quarterly, quarterly_csv_rows
from importcast.errors import ImportcastError
from importcast.forecast import (
    ForecastResult,
    add_quarters,
    horizon_slice,
    quarter_label,
    recursive_forecast,
)
from importcast.ingest import AnnualSeries, parse_annual_csv, validate_span
from importcast.report import (
    ExperimentReport,
    emit_report,
    regression_coefficient,
    report_as_dict,
)
from importcast.scaling import fit_minmax, transform
from importcast.training import mae, mse, train
from importcast.windowing import make_windows, split_boundary
from importcast.lstm import predict_batch


@dataclass
class ExperimentSummary:
    reports: dict[str, ExperimentReport] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def run_country(series: AnnualSeries, config: ExperimentConfig) -> ExperimentReport:
    """Run the full pipeline for one country's annual series."""
    if config.expect_span is not None:
        validate_span(series, *config.expect_span)

    quarterly = annual_to_quarterly(series, config.disaggregation)
    values = np.asarray(quarterly.values, dtype=float)

    # Scaler sees only the values that training windows and targets touch.
    boundary = split_boundary(len(values), config.lookback)
    scaler = fit_minmax(values[:boundary])
    normalized = transform(scaler, values)

    dataset = make_windows(normalized, config.lookback)
    trace = train(dataset, config.train_config(), config.hidden_sizes)
    params = trace.best_params

    preds = predict_batch(params, dataset.inputs, config.candidate_mode)
    split = dataset.split_index
    train_preds, test_preds = preds[:split], preds[split:]

    # Horizon starts right after the last observed quarter.
    last_quarter = add_quarters(quarterly.start, len(values) - 1)
    forecast_full = recursive_forecast(
        params,
        scaler,
        normalized[-config.lookback :],
        config.forecast_steps,
        candidate_mode=config.candidate_mode,
        country_code=series.country_code,
        horizon_start=add_quarters(last_quarter, 1),
    )
    if config.report_from is not None:
        forecast_report = horizon_slice(
            forecast_full, config.report_from, config.report_to
        )
    else:
        forecast_report = forecast_full

    return ExperimentReport(
        country_code=series.country_code,
        train_mse=mse(train_preds, dataset.train_targets),
        train_mae=mae(train_preds, dataset.train_targets),
        test_mse=mse(test_preds, dataset.test_targets),
        test_mae=mae(test_preds, dataset.test_targets),
        regression_all=regression_coefficient(preds, dataset.targets),
        regression_train=regression_coefficient(train_preds, dataset.train_targets),
        regression_test=regression_coefficient(test_preds, dataset.test_targets),
        forecast_full=forecast_full,
        forecast_report=forecast_report,
        scaler=scaler,
        best_epoch=trace.best_epoch,
        trace=trace,
        fit_train=(np.asarray(dataset.train_targets), np.asarray(train_preds)),
        fit_test=(np.asarray(dataset.test_targets), np.asarray(test_preds)),
        config_echo=config.echo(),
    )


def _select_series(config: ExperimentConfig):
    """All requested series plus failure entries for unknown codes."""
    with open(config.input, "r", encoding="utf-8") as fh:
        all_series = {s.country_code: s for s in parse_annual_csv(fh)}
    if config.countries is None:
        return list(all_series.values()), {}
    selected, failures = [], {}
    for code in config.countries:
        if code in all_series:
            selected.append(all_series[code])
        else:
            failures[code] = f"no such series: {code!r} not in {config.input.name}"
    return selected, failures


def _run_country_job(args):
    series, config = args
    try:
        return series.country_code, run_country(series, config), None
    except ImportcastError as exc:
        return series.country_code, None, f"{type(exc).__name__}: {exc}"


def _dump_quarterly(series_list, config: ExperimentConfig) -> None:
    rows = []
    for series in series_list:
        quarterly = annual_to_quarterly(series, config.disaggregation)
        rows.extend(quarterly_csv_rows(quarterly))
    config.dump_quarterly.parent.mkdir(parents=True, exist_ok=True)
    with open(config.dump_quarterly, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("country,year,quarter,value\n")
        for country, year, quarter, value in rows:
            fh.write(f"{country},{year},{quarter},{value!r}\n")


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """Run every selected country and write the output tree."""
    summary = ExperimentSummary()
    # Input-wide problems (unreadable/malformed CSV) abort before any work.
    series_list, missing = _select_series(config)
    summary.failures.update(missing)

    if config.dump_quarterly is not None and series_list:
        _dump_quarterly(series_list, config)

    jobs = config.jobs
    if jobs is None:
        jobs = max(1, min(os.cpu_count() or 1, len(series_list) or 1))

    work = [(series, config) for series in series_list]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_country_job, work))
    else:
        results = [_run_country_job(item) for item in work]

    for code, report, error in results:
        if error is not None:
            summary.failures[code] = error
        else:
            summary.reports[code] = report

    write_outputs(summary, config)
    return summary


def write_outputs(summary: ExperimentSummary, config: ExperimentConfig) -> None:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for code in sorted(summary.reports):
        emit_report(summary.reports[code], out_dir)

    payload = {
        "config": config.echo(),
        "countries": {
            code: report_as_dict(report)
            for code, report in sorted(summary.reports.items())
        },
        "failures": dict(sorted(summary.failures.items())),
    }
    with open(out_dir / "summary.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            "country,status,train_mse,train_mae,test_mse,test_mae,"
            "regression_all,regression_train,regression_test,best_epoch,floored\n"
        )
        for code in sorted(set(summary.reports) | set(summary.failures)):
            if code in summary.reports:
                r = summary.reports[code]
                fh.write(
                    f"{code},ok,{r.train_mse!r},{r.train_mae!r},{r.test_mse!r},"
                    f"{r.test_mae!r},{r.regression_all!r},{r.regression_train!r},"
                    f"{r.regression_test!r},{r.best_epoch},{r.forecast_full.floored}\n"
                )
            else:
                fh.write(f"{code},failed,,,,,,,,,\n")

    _write_forecast_tables(summary, out_dir)


def _write_forecast_tables(summary: ExperimentSummary, out_dir: Path) -> None:
    """Combined forecast tables: quarters as rows, countries as columns."""
    codes = sorted(summary.reports)
    if not codes:
        return
    slices: dict[str, ForecastResult] = {
        code: summary.reports[code].forecast_report for code in codes
    }
    n = min(len(fc) for fc in slices.values())
    anchor = slices[codes[0]]
    labels = [quarter_label(add_quarters(anchor.horizon_start, k)) for k in range(n)]

    for name, fmt in (
        ("forecast_table.csv", lambda v: f"{v:.2E}"),
        ("forecast_table_full.csv", lambda v: repr(float(v))),
    ):
        with open(out_dir / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("quarter," + ",".join(codes) + "\n")
            for k in range(n):
                cells = [fmt(slices[code].values_usd[k]) for code in codes]
                fh.write(labels[k] + "," + ",".join(cells) + "\n")
