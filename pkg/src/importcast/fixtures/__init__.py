"""Bundled data fixtures.

imports_annual.csv holds synthetic annual import series for ten countries
(1970-2019, current US$) at realistic magnitudes. It stands in for live
World Bank / WTO / IMF pulls, which are out of scope. Regenerate with
scripts/make_fixture.py.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def default_fixture_path() -> Path:
    """Filesystem path of the bundled annual-imports CSV."""
    return Path(resources.files(__name__) / "imports_annual.csv")
