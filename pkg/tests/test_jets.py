"""
Tests for second-order forward-mode differentiation
"""

import numpy as np
import pytest

from symdom import jets
from symdom.jets import Jet, partials, value_of


def test_polynomial_partials():
    """Test gradient and Hessian of a polynomial"""
    def f(x, y):
        return x * x * y + 3.0 * y

    val, grad, hess = partials(f, 2.0, 5.0)

    assert val == pytest.approx(35.0)
    assert grad[0] == pytest.approx(20.0)
    assert grad[1] == pytest.approx(7.0)
    assert hess[0, 0] == pytest.approx(10.0)
    assert hess[0, 1] == pytest.approx(4.0)
    assert hess[1, 0] == pytest.approx(4.0)
    assert hess[1, 1] == pytest.approx(0.0)


def test_division_and_sqrt():
    """Test quotient rule and square root derivatives"""
    def f(x):
        return jets.sqrt(x) / (1.0 + x)

    x = 0.7
    h = 1e-5
    h2 = 1e-4
    val, grad, hess = partials(f, x)
    g = lambda s: np.sqrt(s) / (1.0 + s)

    assert val == pytest.approx(g(x))
    assert grad[0] == pytest.approx((g(x + h) - g(x - h)) / (2 * h), rel=1e-7)
    assert hess[0, 0] == pytest.approx((g(x + h2) - 2 * g(x) + g(x - h2)) / h2**2, rel=1e-5)


def test_elementary_functions():
    """Test exp, log, sin and cos on jets"""
    def f(x, y):
        return jets.exp(x) * jets.cos(y) + jets.log(x) * jets.sin(y)

    x, y = 1.3, 0.4
    _, grad, hess = partials(f, x, y)

    assert grad[0] == pytest.approx(np.exp(x) * np.cos(y) + np.sin(y) / x)
    assert grad[1] == pytest.approx(-np.exp(x) * np.sin(y) + np.log(x) * np.cos(y))
    assert hess[0, 1] == pytest.approx(-np.exp(x) * np.sin(y) + np.cos(y) / x)
    assert hess[1, 1] == pytest.approx(-np.exp(x) * np.cos(y) - np.log(x) * np.sin(y))


def test_vectorized_points():
    """Test partials over an array of points"""
    x = np.linspace(0.1, 0.9, 5)
    val, grad, hess = partials(lambda s, t: s**3 * t, x, 2.0)

    assert val.shape == (5,)
    assert grad.shape == (5, 2)
    assert hess.shape == (5, 2, 2)
    assert np.allclose(hess[:, 0, 0], 12.0 * x)


def test_constant_function():
    """Test that a function ignoring its inputs has zero derivatives"""
    val, grad, hess = partials(lambda x, y: 4.0, np.zeros(3), np.ones(3))

    assert np.allclose(val, 4.0)
    assert np.allclose(grad, 0.0)
    assert np.allclose(hess, 0.0)


def test_abs_and_value_of():
    """Test abs of a jet and plain value extraction"""
    (x,) = Jet.variables(np.array([-2.0, 3.0]))
    y = abs(x)

    assert np.allclose(value_of(y), [2.0, 3.0])
    assert np.allclose(y.grad[:, 0], [-1.0, 1.0])
    assert jets.is_jet(y)
    assert not jets.is_jet(value_of(y))
