import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from bosontrace.algebra import Group, build_algebra

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rel_close(a, b, tol):
    """``|a - b| <= tol * max(1, |b|)``."""
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(params=list(Group), ids=lambda g: g.value)
def spec(request):
    return build_algebra(request.param)


ACCEPTANCE_LINES: dict = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
