"""
Tests for utility functions
"""

import numpy as np
import pytest

from symdom.config import Settings, clear_settings, set_settings
from symdom.utils import clamp_unit, fit_decay_order, log_beta, parallel_map, pochhammer, split_point


@pytest.fixture(autouse=True)
def fresh_settings():
    clear_settings()
    yield
    clear_settings()


def test_special_helpers():
    """Test the rising factorial and log beta"""
    assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)
    assert pochhammer(2.0, 0) == 1.0
    assert log_beta(2.0, 3.0) == pytest.approx(np.log(1.0 / 12.0))


def test_split_point():
    """Test splitting tuples and arrays into coordinates"""
    u, v = split_point((0.1, 0.2), 2)
    assert float(u) == 0.1 and float(v) == 0.2
    x1, x2, t = split_point(np.arange(6.0).reshape(2, 3), 3)
    np.testing.assert_allclose(t, [2.0, 5.0])
    with pytest.raises(ValueError):
        split_point((0.1, 0.2), 3)


def test_parallel_map_keeps_order():
    """Test that the threaded map returns results in input order"""
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items) == [x * x for x in items]
    set_settings(Settings(threads=4))
    assert parallel_map(lambda x: x * x, items) == [x * x for x in items]


def test_fit_decay_order():
    """Test the fitted algebraic decay order"""
    degrees = [1, 2, 4, 8]
    errors = [n ** -3.0 for n in degrees]
    assert fit_decay_order(degrees, errors) == pytest.approx(3.0)
    assert np.isnan(fit_decay_order([0, 1], [1.0, 0.5]))


def test_clamp_unit():
    """Test clipping to [-1, 1]"""
    np.testing.assert_array_equal(clamp_unit(np.array([-1.0 - 1e-15, 0.3, 1.0 + 1e-15])), [-1.0, 0.3, 1.0])
