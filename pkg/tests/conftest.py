import math
import sys

import numpy as np
import pytest

from opial_lab.funcspace import GridFunction, SineSeries


def mode(k, L=1.0, amplitude=1.0):
    """``amplitude * sin(k pi x / L)`` as a series."""
    coeffs = np.zeros(k)
    coeffs[-1] = amplitude
    return SineSeries(L, coeffs)


def grid_of(f, L=1.0, n=1000):
    return GridFunction.from_function(f, L, n)


@pytest.fixture
def sine():
    return mode(1)


def rel(a, b):
    return abs(a - b) / abs(b)


PI = math.pi


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
