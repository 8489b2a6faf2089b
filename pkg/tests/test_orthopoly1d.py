"""
Tests for one-dimensional orthogonal polynomials and quadrature
"""

import numpy as np
import pytest
from scipy import special

from symdom.errors import IndexOutOfRangeError, InvalidParameterError
from symdom.orthopoly1d import (
    gauss_jacobi_rule,
    gegenbauer_eval,
    gen_gegenbauer_const,
    gen_gegenbauer_eval,
    gen_gegenbauer_mass,
    gen_gegenbauer_rule,
    gen_gegenbauer_scaled,
    jacobi_deriv,
    jacobi_eval,
    jacobi_homogeneous,
    points_for_exactness,
    skewed_rule,
    symmetric_rule,
    zn_eval,
    zn_table,
)
from symdom.types import GenGegenbauerParams, JacobiParams, QuadKind

GRID = np.linspace(-1.0, 1.0, 11)


@pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, -0.5), (2.3, 1.1), (-0.7, 3.0)])
def test_jacobi_matches_scipy(a, b):
    """Test Jacobi values against scipy"""
    for n in range(8):
        ours = jacobi_eval(n, JacobiParams(a=a, b=b), GRID)
        assert np.allclose(ours, special.eval_jacobi(n, a, b, GRID), rtol=1e-12, atol=1e-12)


def test_jacobi_scalar_input():
    """Test that a scalar point returns a float"""
    value = jacobi_eval(3, JacobiParams(a=1.0, b=2.0), 0.3)
    assert isinstance(value, float)
    assert value == pytest.approx(special.eval_jacobi(3, 1.0, 2.0, 0.3))


def test_homogeneous_form():
    """Test q^n P_n(p / q) and its limit at q = 0"""
    n, a, b = 5, 1.5, 0.5
    p, q = 0.3, 0.6
    assert jacobi_homogeneous(n, a, b, p, q) == pytest.approx(q**n * special.eval_jacobi(n, a, b, p / q))

    leading = special.jacobi(n, a, b).coeffs[0]
    assert jacobi_homogeneous(n, a, b, 0.8, 0.0) == pytest.approx(leading * 0.8**n)


def test_jacobi_derivative():
    """Test first and second derivatives against finite differences"""
    p = JacobiParams(a=0.5, b=1.5)
    t, h = 0.2, 1e-4
    f = lambda s: special.eval_jacobi(6, p.a, p.b, s)

    assert jacobi_deriv(6, p, t, 1) == pytest.approx((f(t + h) - f(t - h)) / (2 * h), rel=1e-6)
    assert jacobi_deriv(6, p, t, 2) == pytest.approx((f(t + h) - 2 * f(t) + f(t - h)) / h**2, rel=1e-4)
    assert jacobi_deriv(1, p, t, 2) == 0.0


def test_gegenbauer_matches_scipy():
    """Test Gegenbauer values against scipy"""
    for lam in (0.25, 1.0, 2.5):
        for n in range(7):
            assert np.allclose(gegenbauer_eval(n, lam, GRID), special.eval_gegenbauer(n, lam, GRID), atol=1e-12)


def test_zn_eval_and_table():
    """Test Z_n = (n + lam) / lam C_n and the stacked table"""
    lam = 1.75
    table = zn_table(6, lam, GRID)
    for n in range(7):
        expected = (n + lam) / lam * special.eval_gegenbauer(n, lam, GRID)
        assert np.allclose(zn_eval(n, lam, GRID), expected, atol=1e-12)
        assert np.allclose(table[n], expected, atol=1e-12)


def test_zn_requires_positive_lambda():
    """Test that Z_n rejects lambda <= 0"""
    with pytest.raises(InvalidParameterError):
        zn_eval(2, 0.0, 0.5)


def test_gen_gegenbauer_reduces_to_gegenbauer():
    """Test that mu = 0 gives the classical Gegenbauer polynomial"""
    for n in range(8):
        ours = gen_gegenbauer_eval(n, GenGegenbauerParams(lam=1.25, mu=0.0), GRID)
        assert np.allclose(ours, special.eval_gegenbauer(n, 1.25, GRID), atol=1e-12)


def test_gen_gegenbauer_scaled_homogeneity():
    """Test r^n C_n(x / r) with r^2 = r2"""
    lam, mu, x, r2 = 1.5, 0.75, 0.3, 0.49
    for n in range(6):
        direct = 0.7**n * gen_gegenbauer_eval(n, GenGegenbauerParams(lam=lam, mu=mu), x / 0.7)
        assert gen_gegenbauer_scaled(n, lam, mu, x, r2) == pytest.approx(direct)


def test_gen_gegenbauer_orthogonality():
    """Test orthogonality under the generalized Gegenbauer rule"""
    p = GenGegenbauerParams(lam=0.8, mu=1.3)
    rule = gen_gegenbauer_rule(5, p)
    values = [np.asarray(gen_gegenbauer_eval(n, p, rule.nodes)) for n in range(8)]
    gram = np.array([[rule.integrate(f * g) for g in values] for f in values])
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-12 * np.max(np.diag(gram))


def test_gen_gegenbauer_rule_moments():
    """Test exactness on even monomials and the total mass"""
    lam, mu = 1.1, 0.4
    rule = gen_gegenbauer_rule(4, GenGegenbauerParams(lam=lam, mu=mu))
    assert rule.exactness == 15
    assert rule.mass == pytest.approx(gen_gegenbauer_mass(lam, mu))
    for k in range(8):
        exact = special.beta(mu + k + 0.5, lam + 0.5)
        assert rule.integrate(rule.nodes ** (2 * k)) == pytest.approx(exact, rel=1e-12)


def test_gauss_jacobi_matches_scipy():
    """Test Golub-Welsch nodes and weights against scipy"""
    for m, a, b in ((1, 0.5, 0.5), (4, 0.0, 0.0), (9, 1.5, -0.5), (12, -0.3, 2.2)):
        rule = gauss_jacobi_rule(m, JacobiParams(a=a, b=b))
        nodes, weights = special.roots_jacobi(m, a, b)
        assert rule.exactness == 2 * m - 1
        assert np.allclose(np.sort(rule.nodes), nodes, atol=1e-13)
        assert np.allclose(rule.weights[np.argsort(rule.nodes)], weights, rtol=1e-10)


def test_normalized_rules_and_limits():
    """Test normalized symmetric and skewed rules and their point-mass limits"""
    assert symmetric_rule(1.5, 6).mass == pytest.approx(1.0)
    assert skewed_rule(0.7, 6).mass == pytest.approx(1.0)

    half = symmetric_rule(-0.5, 6)
    assert half.kind == QuadKind.POINT_MASS_LIMIT
    assert list(half.nodes) == [-1.0, 1.0]
    assert list(half.weights) == [0.5, 0.5]

    right = skewed_rule(0.0, 6)
    assert right.kind == QuadKind.POINT_MASS_LIMIT
    assert list(right.nodes) == [1.0]


def test_skewed_rule_first_moment():
    """Test the mean of t under (1 + t)(1 - t^2)^(kappa - 1)"""
    kappa = 1.5
    rule = skewed_rule(kappa, 8)
    # mean of t is 1 / (2 kappa + 1) for the normalized skewed measure
    assert rule.integrate(rule.nodes) == pytest.approx(1.0 / (2.0 * kappa + 1.0))


def test_invalid_parameters():
    """Test rejection of invalid exponents and degrees"""
    with pytest.raises(InvalidParameterError):
        jacobi_eval(2, JacobiParams(a=-1.0, b=0.0), 0.1)
    with pytest.raises(IndexOutOfRangeError):
        jacobi_eval(-1, JacobiParams(a=0.0, b=0.0), 0.1)
    with pytest.raises(InvalidParameterError):
        gen_gegenbauer_eval(2, GenGegenbauerParams(lam=-0.5, mu=0.0), 0.1)
    with pytest.raises(InvalidParameterError):
        symmetric_rule(-0.6, 3)
    with pytest.raises(InvalidParameterError):
        skewed_rule(-0.1, 3)


def test_points_for_exactness():
    """Test node counts for a target exactness"""
    assert points_for_exactness(0) == 1
    assert points_for_exactness(5) == 3
    assert points_for_exactness(6) == 4
    assert points_for_exactness(5, per_node=4) == 2


def test_gen_gegenbauer_const_at_vanishing_sum():
    """Test the normalization constant when lam + mu = 0"""
    assert gen_gegenbauer_const(0.25, -0.25, 0) == 1.0
    assert gen_gegenbauer_const(0.0, 0.0, 1) == pytest.approx(2.0)
    assert gen_gegenbauer_const(1.0, 0.5, 2) == pytest.approx(1.5 * 2.5 / (1.0 * 2.0))


@pytest.mark.parametrize("n", range(1, 9))
def test_gen_gegenbauer_chebyshev_limit(n):
    """Test that lam = mu = 0 gives 2 T_n / n instead of zero"""
    values = gen_gegenbauer_eval(n, GenGegenbauerParams(lam=0.0, mu=0.0), GRID)
    assert np.allclose(values, 2.0 * special.eval_chebyt(n, GRID) / n, atol=1e-12)


def test_gen_gegenbauer_orthogonal_at_vanishing_sum():
    """Test orthogonality for lam + mu = 0 with mu != 0"""
    params = GenGegenbauerParams(lam=0.25, mu=-0.25)
    rule = gen_gegenbauer_rule(10, params)
    table = np.stack([np.asarray(gen_gegenbauer_eval(n, params, rule.nodes)) for n in range(7)], axis=-1)
    gram = table.T @ (rule.weights[:, None] * table)
    assert np.all(np.diag(gram) > 1e-6)
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-12 * np.max(np.diag(gram))
