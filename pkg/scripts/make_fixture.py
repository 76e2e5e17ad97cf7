"""Regenerate the bundled synthetic annual-imports fixture.

Ten countries, 1970-2019, current US$. Each series is a deterministic
smooth growth curve (log-space, decelerating toward the end) with mild
multi-year cycles, scaled so 2019 lands near each country's real-world
import magnitude. IRN and GRC additionally decline from a late-series
peak, mirroring their actual trajectories. All parameters are fixed in
the table below, so the output is byte-stable.

Usage: python scripts/make_fixture.py [dest.csv]
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

START_YEAR = 1970
N_YEARS = 50

# code: (value_2019, ratio_1970, decel_power, cycle_amp, cycles, phase,
#        decline_onset_u, decline_depth)
COUNTRIES = {
    "USA": (3.00e12, 0.014, 3.2, 0.035, 3.0, 0.3, None, 0.0),
    "CAN": (5.00e11, 0.028, 3.0, 0.040, 3.5, 1.1, None, 0.0),
    "DEU": (1.60e12, 0.019, 3.1, 0.030, 2.8, 2.0, None, 0.0),
    "FRA": (7.00e11, 0.027, 3.3, 0.035, 3.2, 0.7, None, 0.0),
    "JPN": (7.40e11, 0.026, 2.9, 0.045, 3.8, 1.6, None, 0.0),
    "TUR": (2.60e11, 0.004, 3.4, 0.050, 4.0, 2.4, None, 0.0),
    "KOR": (6.00e11, 0.003, 3.0, 0.040, 3.4, 0.1, None, 0.0),
    "PRT": (8.00e10, 0.020, 3.2, 0.045, 3.6, 1.9, None, 0.0),
    "GRC": (7.30e10, 0.022, 2.8, 0.040, 3.0, 2.7, 0.78, 0.22),
    "IRN": (5.50e10, 0.030, 2.9, 0.050, 3.3, 1.4, 0.82, 0.30),
}


def annual_value(code: str, year: int) -> float:
    v2019, ratio, power, amp, cycles, phase, onset, depth = COUNTRIES[code]
    u = (year - START_YEAR) / (N_YEARS - 1)
    # Log-space growth from ratio*v2019 to v2019, slope tapering to ~0.
    shape = 1.0 - (1.0 - u) ** power
    log_v = math.log(v2019 * ratio) + shape * (math.log(v2019) - math.log(v2019 * ratio))
    value = math.exp(log_v)
    value *= 1.0 + amp * math.sin(2.0 * math.pi * cycles * u + phase)
    value *= 1.0 + 0.015 * math.sin(2.0 * math.pi * 7.0 * u + 2.0 * phase)
    if onset is not None and u > onset:
        over = (u - onset) / (1.0 - onset)
        value *= 1.0 - depth * over * over
    return float(f"{value:.8g}")


def main() -> None:
    dest = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent
        / "src" / "importcast" / "fixtures" / "imports_annual.csv"
    )
    lines = ["country,year,value"]
    for code in sorted(COUNTRIES):
        for year in range(START_YEAR, START_YEAR + N_YEARS):
            lines.append(f"{code},{year},{annual_value(code, year)!r}")
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {dest} ({len(lines) - 1} rows)")


if __name__ == "__main__":
    main()
