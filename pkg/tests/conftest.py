import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kkmds.core import Instance
from kkmds.netting import EpsNet

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def line_net(lo: int, hi: int) -> EpsNet:
    """Integer points lo..hi on a line."""
    return EpsNet.from_points(np.arange(lo, hi + 1, dtype=float))


def grid_net(lo: int, hi: int) -> EpsNet:
    """Integer points of the square [lo, hi]^2."""
    r = np.arange(lo, hi + 1, dtype=float)
    return EpsNet.from_points(np.array([[a, b] for a in r for b in r]))


def points_instance(points) -> Instance:
    return Instance.from_points(np.asarray(points, dtype=float))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# (criterion number, title, passed, detail) recorded by the acceptance suite
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num, title, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {num:2d} {title}: {detail}")
