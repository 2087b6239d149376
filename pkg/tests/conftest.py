import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile('wcolab', max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile('wcolab')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES
    if LINES:
        terminalreporter.section('acceptance criteria')
        for line in sorted(LINES, key=lambda l: int(l.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)
