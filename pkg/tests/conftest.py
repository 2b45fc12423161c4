from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=(HealthCheck.too_slow,),
)
settings.load_profile("suite")


@pytest.fixture
def data_dir() -> Path:
    return Path(__file__).parent / "data"
