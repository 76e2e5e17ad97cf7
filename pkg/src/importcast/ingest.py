"""Parse and validate annual import series from long-format CSV.

Expected layout: a ``country,year,value`` header followed by one row per
(country, year). Values are current US$, non-negative, with ``.`` as the
decimal separator; scientific notation (``3.1E+12``) is accepted.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterable

from importcast.errors import ParseError, ValidationError

HEADER = ("country", "year", "value")


@dataclass(frozen=True)
class AnnualSeries:
    """One country's annual import values over a contiguous year span."""

    country_code: str
    start_year: int
    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.country_code) != 3:
            raise ValidationError(
                f"country code must be 3 letters, got {self.country_code!r}"
            )
        if not self.values:
            raise ValidationError(f"{self.country_code}: empty series")
        for i, v in enumerate(self.values):
            if not math.isfinite(v):
                raise ValidationError(
                    f"{self.country_code}: non-finite value at year "
                    f"{self.start_year + i}"
                )
            if v < 0:
                raise ValidationError(
                    f"{self.country_code}: negative value {v} at year "
                    f"{self.start_year + i}"
                )

    @property
    def end_year(self) -> int:
        return self.start_year + len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)


def parse_annual_csv(stream: IO[str] | str) -> list[AnnualSeries]:
    """Parse long-format CSV into one AnnualSeries per country.

    Rows may arrive in any order; they are sorted by year per country.
    Years must be contiguous within a country and (country, year) pairs
    must be unique. Malformed rows raise ParseError with the line number;
    invariant violations raise ValidationError.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)

    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected header 'country,year,value'")
    if tuple(h.strip().lower() for h in header) != HEADER:
        raise ParseError(
            f"expected header 'country,year,value', got {','.join(header)!r}",
            line_number=1,
        )

    rows: dict[str, dict[int, float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise ParseError(
                f"expected 3 columns, got {len(row)}", line_number=lineno
            )
        country = row[0].strip()
        try:
            year = int(row[1])
        except ValueError:
            raise ParseError(f"non-integer year {row[1]!r}", line_number=lineno)
        try:
            value = float(row[2])
        except ValueError:
            raise ParseError(f"non-numeric value {row[2]!r}", line_number=lineno)
        per_country = rows.setdefault(country, {})
        if year in per_country:
            raise ValidationError(f"duplicate row for {country} year {year}")
        per_country[year] = value

    out = []
    for country in sorted(rows):
        by_year = rows[country]
        years = sorted(by_year)
        for prev, cur in zip(years, years[1:]):
            if cur != prev + 1:
                raise ValidationError(
                    f"{country}: year gap, missing {prev + 1}"
                )
        out.append(
            AnnualSeries(
                country_code=country,
                start_year=years[0],
                values=tuple(by_year[y] for y in years),
            )
        )
    return out


def emit_annual_csv(series: Iterable[AnnualSeries]) -> str:
    """Serialize series back to the long-format CSV; exact round-trip.

    Values are written with repr so parse(emit(s)) reproduces every float
    bit-for-bit.
    """
    lines = [",".join(HEADER)]
    for s in series:
        for i, v in enumerate(s.values):
            lines.append(f"{s.country_code},{s.start_year + i},{v!r}")
    return "\n".join(lines) + "\n"


def validate_span(
    series: AnnualSeries, expected_start: int, expected_len: int
) -> AnnualSeries:
    """Check the series covers exactly [expected_start, +expected_len)."""
    if series.start_year != expected_start or len(series) != expected_len:
        raise ValidationError(
            f"{series.country_code}: expected {expected_len} years starting "
            f"{expected_start}, got {len(series)} starting {series.start_year}"
        )
    return series
