import numpy as np
import pytest

import cppnstudio as cs

# Collected by the acceptance suite; printed uncaptured at the end of the run.
ACCEPTANCE_RESULTS: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, outcome in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number:2d} [{name}]: {outcome}")


@pytest.fixture
def registry():
    return cs.InnovationRegistry()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def gray_seed(registry, rng):
    return cs.seed_genome("gray", registry, rng)


@pytest.fixture
def color_seed(registry, rng):
    return cs.seed_genome("color", registry, rng)
