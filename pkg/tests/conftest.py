"""Shared small graphs and function specs for the test suite."""

import numpy as np
import pytest

from acdd import powerfun as pf
from acdd.graphs import make_graph


@pytest.fixture
def k2():
    return make_graph(2, False, [(0, 1)])


@pytest.fixture
def k3():
    return make_graph(3, False, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def c4():
    return make_graph(4, False, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def f_hump():
    # -4x^2 + 4x
    return pf.poly(0.0, 4.0, -4.0)


@pytest.fixture
def g_linear():
    # 1 - x
    return pf.poly(1.0, -1.0)


def assert_close(actual, expected, tol, label=""):
    actual = np.asarray(actual, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    err = np.max(np.abs(actual - expected))
    assert err <= tol, f"{label}: |{actual} - {expected}| = {err} > {tol}"
