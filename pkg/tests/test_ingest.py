import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from importcast.errors import ParseError, ValidationError
from importcast.ingest import (
    AnnualSeries,
    emit_annual_csv,
    parse_annual_csv,
    validate_span,
)


def test_parse_two_rows():
    out = parse_annual_csv("country,year,value\nIRN,1970,100.0\nIRN,1971,110.0")
    assert len(out) == 1
    s = out[0]
    assert s.country_code == "IRN"
    assert s.start_year == 1970
    assert s.values == (100.0, 110.0)


def test_empty_body_gives_empty_list():
    assert parse_annual_csv("country,year,value\n") == []


def test_year_gap_rejected():
    with pytest.raises(ValidationError, match="missing 1971"):
        parse_annual_csv("country,year,value\nIRN,1970,1.0\nIRN,1972,2.0")


def test_negative_value_rejected():
    with pytest.raises(ValidationError, match="negative"):
        parse_annual_csv("country,year,value\nIRN,1970,-5.0")


def test_duplicate_row_rejected():
    with pytest.raises(ValidationError, match="duplicate"):
        parse_annual_csv("country,year,value\nIRN,1970,1.0\nIRN,1970,1.0")


def test_malformed_row_reports_line_number():
    with pytest.raises(ParseError, match="line 3"):
        parse_annual_csv("country,year,value\nIRN,1970,1.0\nIRN,1971\n")
    with pytest.raises(ParseError, match="line 2") as err:
        parse_annual_csv("country,year,value\nIRN,1970,abc\n")
    assert err.value.line_number == 2


def test_bad_header_rejected():
    with pytest.raises(ParseError, match="header"):
        parse_annual_csv("nation,year,value\nIRN,1970,1.0\n")


def test_scientific_notation_accepted():
    out = parse_annual_csv("country,year,value\nUSA,1970,3.1E+12\n")
    assert out[0].values == (3.1e12,)


def test_multiple_countries_sorted():
    text = "country,year,value\nUSA,1970,2.0\nIRN,1970,1.0\n"
    out = parse_annual_csv(text)
    assert [s.country_code for s in out] == ["IRN", "USA"]


def test_row_order_insensitive():
    rows = [f"C{i % 2}A,{1970 + i // 2},{float(i)}" for i in range(20)]
    baseline = parse_annual_csv("country,year,value\n" + "\n".join(rows))
    rng = random.Random(5)
    for _ in range(5):
        rng.shuffle(rows)
        assert parse_annual_csv("country,year,value\n" + "\n".join(rows)) == baseline


@given(
    st.lists(
        st.floats(min_value=0, max_value=1e15, allow_nan=False),
        min_size=1,
        max_size=60,
    ),
    st.integers(min_value=1900, max_value=2100),
)
def test_emit_parse_round_trip_exact(values, start_year):
    series = AnnualSeries("ABC", start_year, tuple(values))
    parsed = parse_annual_csv(emit_annual_csv([series]))
    assert parsed == [series]


def test_annual_series_invariants():
    with pytest.raises(ValidationError):
        AnnualSeries("TOOLONG", 1970, (1.0,))
    with pytest.raises(ValidationError):
        AnnualSeries("IRN", 1970, ())
    with pytest.raises(ValidationError):
        AnnualSeries("IRN", 1970, (1.0, float("nan")))
    with pytest.raises(ValidationError):
        AnnualSeries("IRN", 1970, (1.0, -2.0))


def test_validate_span():
    series = AnnualSeries("IRN", 1970, tuple(float(v) for v in range(50)))
    assert validate_span(series, 1970, 50) is series
    short = AnnualSeries("IRN", 1970, tuple(float(v) for v in range(49)))
    with pytest.raises(ValidationError, match="expected 50 years"):
        validate_span(short, 1970, 50)
    shifted = AnnualSeries("IRN", 1971, tuple(float(v) for v in range(50)))
    with pytest.raises(ValidationError, match="starting 1970"):
        validate_span(shifted, 1970, 50)
