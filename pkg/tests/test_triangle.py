"""
Tests for Jacobi polynomials on the triangle
"""

import numpy as np
import pytest
from scipy import special

from symdom.errors import DomainViolationError, IndexOutOfRangeError, InvalidParameterError
from symdom.triangle import (
    triangle_basis_eval,
    triangle_diffop_apply,
    triangle_eigenvalue,
    triangle_indices,
    triangle_kernel_eval,
    triangle_kernel_sum,
    triangle_norm_const,
    triangle_orthonormal_eval,
    triangle_quadrature,
)
from symdom.types import TriangleWeightParams

PARAMS = TriangleWeightParams(alpha1=0.5, alpha2=-0.5, alpha3=1.0)


def test_basis_formula():
    """Test T_{j,m} against its Jacobi product form at an interior point"""
    u, v = 0.2, 0.3
    j, m = 2, 4
    a1, a2, a3 = PARAMS.as_tuple()
    outer = special.eval_jacobi(m - j, 2 * j + a1 + a3 + 1, a2, 2 * v - 1)
    inner = (1 - v) ** j * special.eval_jacobi(j, a3, a1, 2 * u / (1 - v) - 1)
    assert triangle_basis_eval(PARAMS, j, m, (u, v)) == pytest.approx(outer * inner)


def test_basis_at_top_vertex():
    """Test that the basis is finite at v = 1"""
    value = triangle_basis_eval(PARAMS, 3, 3, (0.0, 1.0))
    assert np.isfinite(value)


def test_quadrature_mass():
    """Test that the rule reproduces 1 / b for the weight"""
    rule = triangle_quadrature(PARAMS, 6)
    assert rule.mass == pytest.approx(1.0 / triangle_norm_const(PARAMS), rel=1e-12)
    assert rule.exactness >= 6


def test_orthonormality():
    """Test the Gram matrix of the orthonormal basis up to degree 5"""
    rule = triangle_quadrature(PARAMS, 10)
    pts = rule.coords()
    indices = [idx for m in range(6) for idx in triangle_indices(m)]
    table = np.stack([np.asarray(triangle_orthonormal_eval(PARAMS, j, m, pts)) for j, m in indices], axis=-1)
    gram = table.T @ (rule.weights[:, None] * table) / rule.mass
    assert np.max(np.abs(gram - np.eye(len(indices)))) < 1e-10


@pytest.mark.parametrize(
    "params",
    [
        TriangleWeightParams(alpha1=0.0, alpha2=0.0, alpha3=0.0),
        TriangleWeightParams(alpha1=0.5, alpha2=1.0, alpha3=-0.5),
        TriangleWeightParams(alpha1=-0.5, alpha2=-0.5, alpha3=0.25),
    ],
)
def test_kernel_closed_form_matches_sum(params):
    """Test the integral kernel formula against the basis sum"""
    p1 = (np.array([0.1, 0.3, 0.05]), np.array([0.2, 0.4, 0.9]))
    p2 = (np.array([0.6, 0.25, 0.3]), np.array([0.1, 0.5, 0.3]))
    for n in range(5):
        closed = np.asarray(triangle_kernel_eval(params, n, p1, p2))
        summed = np.asarray(triangle_kernel_sum(params, n, p1, p2))
        assert np.allclose(closed, summed, rtol=1e-9, atol=1e-9)


def test_kernel_rejects_small_rule():
    """Test that rule_res below n + 2 is rejected"""
    with pytest.raises(InvalidParameterError):
        triangle_kernel_eval(PARAMS, 4, (0.1, 0.2), (0.3, 0.3), rule_res=3)


def test_diffop_on_linear_polynomial():
    """Test the operator on u written in the T basis for the unit weight"""
    params = TriangleWeightParams(alpha1=0.0, alpha2=0.0, alpha3=0.0)
    poly = {(1, 1): 0.5, (0, 1): -1.0 / 6.0, (0, 0): 1.0 / 3.0}
    u = np.array([0.1, 0.25, 0.4])
    v = np.array([0.3, 0.5, 0.2])
    assert np.allclose(triangle_diffop_apply(params, poly, (u, v)), 1.0 - 3.0 * u)


def test_diffop_eigenfunctions():
    """Test the eigenvalue equation on every basis member up to degree 4"""
    u = np.array([0.15, 0.3, 0.6])
    v = np.array([0.2, 0.55, 0.1])
    for m in range(5):
        lam = triangle_eigenvalue(PARAMS, m)
        for j, deg in triangle_indices(m):
            applied = triangle_diffop_apply(PARAMS, {(j, deg): 1.0}, (u, v))
            expected = lam * np.asarray(triangle_basis_eval(PARAMS, j, deg, (u, v)))
            assert np.allclose(applied, expected, rtol=1e-9, atol=1e-9)


def test_diffop_needs_interior_points():
    """Test that boundary points are rejected"""
    with pytest.raises(DomainViolationError):
        triangle_diffop_apply(PARAMS, {(0, 1): 1.0}, (0.0, 0.5))


def test_index_and_parameter_validation():
    """Test invalid indices and exponents"""
    with pytest.raises(IndexOutOfRangeError):
        triangle_basis_eval(PARAMS, 3, 2, (0.1, 0.1))
    with pytest.raises(InvalidParameterError):
        triangle_kernel_eval(TriangleWeightParams(alpha1=-0.6, alpha2=0.0, alpha3=0.0), 1, (0.1, 0.1), (0.2, 0.2))
