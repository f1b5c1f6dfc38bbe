import os

import pytest
from hypothesis import HealthCheck, settings

from sfclab.config import load_preset

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fixed():
    """The three fixed-manipulator controllers and their design sample time."""
    sfc, dt = load_preset("fixed_sfc")
    lac, _ = load_preset("fixed_lac")
    nac, _ = load_preset("fixed_nac")
    return {"sfc": sfc, "lac": lac, "nac": nac, "dt": dt}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
