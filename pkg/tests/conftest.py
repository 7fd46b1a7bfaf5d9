import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from frobsplit.rootdata import load_corpus

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

RANK_ONE = ("sl2", "gl2", "pgl2")


@pytest.fixture(scope="session")
def corpus():
    return {n: load_corpus(n) for n in ("sl2", "pgl2", "gl2", "sl3", "pgl3", "b2")}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
