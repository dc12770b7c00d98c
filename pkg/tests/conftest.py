import numpy as np
import pytest
from hypothesis import settings

from liaplab import coefficients as co

settings.register_profile("liaplab", max_examples=40, deadline=None)
settings.load_profile("liaplab")


@pytest.fixture
def example1():
    return co.make_example1(1.0, 2.0, 4.0, co.zero_forcing(), co.no_damping(1.0))


@pytest.fixture
def example1_sine():
    return co.make_example1(1.0, 2.0, 4.0, co.sine_forcing(0.5), co.no_damping(1.0))


@pytest.fixture
def example2():
    return co.make_example2(1.0, 0.25, 4.0, 0.5, co.zero_forcing(), co.no_damping(1.0))


@pytest.fixture
def example3():
    return co.make_example3(co.periodic_eps(0.5, 0.5, 1.0), 4.0, 1.0, 1.0,
                            co.zero_forcing(), co.no_damping(1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def const_problem(eps0=0.0, C0=4.0, a_prime=1.0, forcing=None, damping=None, **declared):
    """Constant-coefficient problem with optional overridden declarations."""
    fam = co.constant_family(eps0, C0, **declared)
    return co.Problem(fam, forcing or co.zero_forcing(), damping or co.no_damping(a_prime))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
