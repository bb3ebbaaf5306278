from __future__ import annotations

from pathlib import Path

import pytest

from sitrep.config import load_config
from sitrep.pipeline import build_report_data

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_config():
    return load_config(FIXTURES / "config.yaml")


@pytest.fixture(scope="session")
def fixture_report(fixture_config) -> dict:
    """The report built from the bundled corpus with the mock provider."""
    return build_report_data(fixture_config)
