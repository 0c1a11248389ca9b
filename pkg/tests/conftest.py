import random

import pytest
from hypothesis import HealthCheck, settings

from einfchar import free_homology
from einfchar.dual_steenrod import default_algebra
from einfchar.f2poly import F2Polynomial

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_element(monomials, universe, rng: random.Random) -> F2Polynomial:
    picked = [m for m in monomials if rng.random() < 0.5]
    return F2Polynomial(picked, universe)


@pytest.fixture(scope="session")
def dual():
    return default_algebra()


@pytest.fixture(scope="session")
def h1():
    return free_homology.algebra(1)
