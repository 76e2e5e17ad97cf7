"""Experiment configuration: JSON config file plus CLI flag overrides.

Unknown keys are rejected (typo protection, with a did-you-mean hint) and
every range violation is named precisely. Flags win over file values; the
defaults below fill whatever neither provides.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass, field
from pathlib import Path

from importcast.disaggregate import METHODS
from importcast.errors import ConfigError
from importcast.fixtures import default_fixture_path
from importcast.forecast import YearQuarter, parse_quarter_label, quarter_index
from importcast.lstm import CANDIDATE_MODES
from importcast.training import TrainConfig

DEFAULTS: dict = {
    "input": None,  # None -> bundled fixture
    "countries": "all",
    "disaggregation": "smooth",
    "lookback": 4,
    "hidden_sizes": [16, 16, 16],
    "candidate_mode": "sigmoid",
    "epochs": 200,
    "learning_rate": 1e-2,
    "adam_beta1": 0.9,
    "adam_beta2": 0.999,
    "adam_eps": 1e-8,
    "seed": 0,
    "grad_clip_norm": 5.0,
    "forecast_steps": 24,
    "report_from": "2021q1",
    "report_to": "2025q4",
    "out_dir": "out",
    "jobs": None,  # None -> min(cpu count, country count)
    "expect_span": "1970:50",  # "none" disables the span check
    "dump_quarterly": None,
}


@dataclass(frozen=True)
class ExperimentConfig:
    input: Path
    countries: tuple[str, ...] | None  # None -> all countries in the input
    disaggregation: str
    lookback: int
    hidden_sizes: tuple[int, ...]
    candidate_mode: str
    epochs: int
    learning_rate: float
    adam_beta1: float
    adam_beta2: float
    adam_eps: float
    seed: int
    grad_clip_norm: float
    forecast_steps: int
    report_from: YearQuarter | None
    report_to: YearQuarter | None
    out_dir: Path
    jobs: int | None
    expect_span: tuple[int, int] | None  # (start_year, n_years)
    dump_quarterly: Path | None = field(default=None)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            adam_beta1=self.adam_beta1,
            adam_beta2=self.adam_beta2,
            adam_eps=self.adam_eps,
            seed=self.seed,
            grad_clip_norm=self.grad_clip_norm,
            candidate_mode=self.candidate_mode,
        )

    def echo(self) -> dict:
        """Config as written to reports and the summary, for auditability."""
        return {
            "input": str(self.input),
            "disaggregation": self.disaggregation,
            "lookback": self.lookback,
            "hidden_sizes": list(self.hidden_sizes),
            "candidate_mode": self.candidate_mode,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "grad_clip_norm": self.grad_clip_norm,
            "forecast_steps": self.forecast_steps,
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _as_int(key: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    _require(value >= minimum, f"{key} must be >= {minimum}, got {value}")
    return value


def _as_positive_float(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    _require(value > 0, f"{key} must be > 0, got {value}")
    return float(value)


def validate_config(raw: dict) -> ExperimentConfig:
    """Normalize a raw key-value config, filling documented defaults."""
    unknown = set(raw) - set(DEFAULTS)
    if unknown:
        key = sorted(unknown)[0]
        hint = difflib.get_close_matches(key, DEFAULTS, n=1)
        suggestion = f", did you mean {hint[0]!r}?" if hint else ""
        raise ConfigError(f"unknown config key {key!r}{suggestion}")

    merged = {**DEFAULTS, **{k: v for k, v in raw.items() if v is not None}}

    input_path = Path(merged["input"]) if merged["input"] else default_fixture_path()
    _require(input_path.exists(), f"input file does not exist: {input_path}")

    countries = merged["countries"]
    if isinstance(countries, str):
        countries = None if countries.lower() == "all" else countries.split(",")
    if countries is not None:
        countries = tuple(c.strip().upper() for c in countries if c.strip())
        _require(len(countries) > 0, "countries list is empty")

    disaggregation = merged["disaggregation"]
    _require(
        disaggregation in METHODS,
        f"disaggregation must be one of {METHODS}, got {disaggregation!r}",
    )
    candidate_mode = merged["candidate_mode"]
    _require(
        candidate_mode in CANDIDATE_MODES,
        f"candidate_mode must be one of {CANDIDATE_MODES}, got {candidate_mode!r}",
    )

    hidden_sizes = merged["hidden_sizes"]
    if isinstance(hidden_sizes, str):
        hidden_sizes = [s for s in hidden_sizes.split(",") if s.strip()]
        try:
            hidden_sizes = [int(s) for s in hidden_sizes]
        except ValueError:
            raise ConfigError(f"hidden_sizes must be integers, got {merged['hidden_sizes']!r}")
    _require(
        isinstance(hidden_sizes, (list, tuple)) and len(hidden_sizes) > 0,
        f"hidden_sizes must be a non-empty list, got {hidden_sizes!r}",
    )
    hidden_sizes = tuple(_as_int("hidden_sizes entry", h, 1) for h in hidden_sizes)

    report_from = merged["report_from"]
    report_to = merged["report_to"]
    if isinstance(report_from, str):
        report_from = None if report_from.lower() == "none" else parse_quarter_label(report_from)
    if isinstance(report_to, str):
        report_to = None if report_to.lower() == "none" else parse_quarter_label(report_to)
    _require(
        (report_from is None) == (report_to is None),
        "report_from and report_to must be given together (or both 'none')",
    )
    if report_from is not None:
        _require(
            quarter_index(report_from) <= quarter_index(report_to),
            f"report_from {merged['report_from']} is after report_to {merged['report_to']}",
        )

    expect_span = merged["expect_span"]
    if isinstance(expect_span, str):
        if expect_span.lower() == "none":
            expect_span = None
        else:
            try:
                start_s, len_s = expect_span.split(":")
                expect_span = (int(start_s), int(len_s))
            except ValueError:
                raise ConfigError(
                    f"expect_span must look like '1970:50' or 'none', got {expect_span!r}"
                )
            _require(expect_span[1] >= 1, f"expect_span length must be >= 1, got {expect_span[1]}")

    jobs = merged["jobs"]
    if jobs is not None:
        jobs = _as_int("jobs", jobs, 1)

    return ExperimentConfig(
        input=input_path,
        countries=countries,
        disaggregation=disaggregation,
        lookback=_as_int("lookback", merged["lookback"], 1),
        hidden_sizes=hidden_sizes,
        candidate_mode=candidate_mode,
        epochs=_as_int("epochs", merged["epochs"], 1),
        learning_rate=_as_positive_float("learning_rate", merged["learning_rate"]),
        adam_beta1=_as_positive_float("adam_beta1", merged["adam_beta1"]),
        adam_beta2=_as_positive_float("adam_beta2", merged["adam_beta2"]),
        adam_eps=_as_positive_float("adam_eps", merged["adam_eps"]),
        seed=_as_int("seed", merged["seed"], 0),
        grad_clip_norm=_as_positive_float("grad_clip_norm", merged["grad_clip_norm"]),
        forecast_steps=_as_int("forecast_steps", merged["forecast_steps"], 1),
        report_from=report_from,
        report_to=report_to,
        out_dir=Path(merged["out_dir"]),
        jobs=jobs,
        expect_span=expect_span,
        dump_quarterly=Path(merged["dump_quarterly"]) if merged["dump_quarterly"] else None,
    )


def load_config_file(path) -> dict:
    """Read a JSON config file into a raw dict (validated separately)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return raw
