import pytest
from hypothesis import HealthCheck, settings

from slaterint.orbital import SlaterOrbital

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def orb(n, l, m, center, delta=1.0):
    return SlaterOrbital(n, l, m, delta, center)


@pytest.fixture
def make_orbital():
    return orb


ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
