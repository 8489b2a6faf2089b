"""
Tests for orthogonal polynomials on the disk
"""

import numpy as np
import pytest

from symdom.disk import (
    disk_basis_eval,
    disk_basis_norm,
    disk_diffop_apply,
    disk_eigenvalue,
    disk_even_basis_eval,
    disk_even_indices,
    disk_even_rank,
    disk_indices,
    disk_kernel_eval,
    disk_kernel_sum,
    disk_orthonormal_eval,
    disk_parity_kernel_eval,
    disk_quadrature,
    disk_triangle_relation_check,
    half_disk_quadrature,
)
from symdom.errors import DegenerateSampleError, IndexOutOfRangeError, InvalidParameterError, SingularEvaluationError
from symdom.orthopoly1d import gen_gegenbauer_mass
from symdom.types import DiskWeightParams

KAPPA = DiskWeightParams(kappa1=0.5, kappa2=1.0, kappa3=0.25)
POINTS1 = (np.array([0.1, -0.4, 0.3, 0.55]), np.array([0.2, 0.5, -0.6, 0.1]))
POINTS2 = (np.array([-0.3, 0.2, 0.45, 0.05]), np.array([0.7, -0.1, 0.35, 0.6]))


def test_quadrature_mass():
    """Test the product rule mass against the closed-form weight integral"""
    rule = disk_quadrature(KAPPA, 4)
    k1, k2, k3 = KAPPA.kappa1, KAPPA.kappa2, KAPPA.kappa3
    expected = gen_gegenbauer_mass(k1 + k3 + 1.0, k2) * gen_gegenbauer_mass(k3 + 0.5, k1)
    assert rule.mass == pytest.approx(expected, rel=1e-12)


def test_orthonormality():
    """Test the Gram matrix of the disk basis up to degree 5"""
    rule = disk_quadrature(KAPPA, 10)
    pts = rule.coords()
    indices = [idx for n in range(6) for idx in disk_indices(n)]
    table = np.stack([np.asarray(disk_orthonormal_eval(KAPPA, j, n, pts)) for j, n in indices], axis=-1)
    gram = table.T @ (rule.weights[:, None] * table) / rule.mass
    assert np.max(np.abs(gram - np.eye(len(indices)))) < 1e-9


@pytest.mark.parametrize(
    "kappa",
    [
        DiskWeightParams(kappa1=0.0, kappa2=0.75, kappa3=-0.5),
        DiskWeightParams(kappa1=0.25, kappa2=0.0, kappa3=-0.75),
    ],
)
def test_orthonormality_when_kappa1_plus_kappa3_is_minus_half(kappa):
    """Test that the inner factor keeps its degree when kappa1 + kappa3 = -1/2"""
    rule = disk_quadrature(kappa, 10)
    pts = rule.coords()
    indices = [idx for n in range(6) for idx in disk_indices(n)]
    assert all(disk_basis_norm(kappa, j, n) > 1e-8 for j, n in indices)
    table = np.stack([np.asarray(disk_orthonormal_eval(kappa, j, n, pts)) for j, n in indices], axis=-1)
    assert np.all(np.isfinite(table))
    gram = table.T @ (rule.weights[:, None] * table) / rule.mass
    assert np.max(np.abs(gram - np.eye(len(indices)))) < 1e-9


def test_half_rule_covers_half_mass():
    """Test that the upper-half rule carries half the mass"""
    full = disk_quadrature(KAPPA, 6)
    half = half_disk_quadrature(KAPPA, 6)
    assert half.mass == pytest.approx(full.mass / 2.0)
    assert np.all(half.points[:, 1] > 0)


def test_basis_on_boundary_circle():
    """Test that |v| = 1 is evaluated without division"""
    assert np.isfinite(disk_basis_eval(KAPPA, 3, 4, (0.0, 1.0)))


@pytest.mark.parametrize(
    "kappa",
    [
        DiskWeightParams(kappa1=0.0, kappa2=0.0, kappa3=0.0),
        DiskWeightParams(kappa1=0.5, kappa2=1.0, kappa3=0.25),
        DiskWeightParams(kappa1=0.0, kappa2=0.75, kappa3=-0.5),
    ],
)
def test_kernel_closed_form_matches_sum(kappa):
    """Test the triple integral kernel against the basis sum"""
    for n in range(6):
        closed = np.asarray(disk_kernel_eval(kappa, n, POINTS1, POINTS2))
        summed = np.asarray(disk_kernel_sum(kappa, n, POINTS1, POINTS2))
        assert np.allclose(closed, summed, rtol=1e-8, atol=1e-8)


def test_parity_kernel_matches_even_basis_sum():
    """Test the two-integral even kernel against the even basis"""
    kappa = DiskWeightParams(kappa1=0.0, kappa2=0.5, kappa3=1.0)
    rule = disk_quadrature(kappa, 12)
    for n in range(5):
        total = 0.0
        for j, deg in disk_even_indices(n):
            vals = np.asarray(disk_even_basis_eval(kappa, j, deg, rule.coords()))
            norm = rule.mean(vals**2)
            total = total + np.asarray(disk_even_basis_eval(kappa, j, deg, POINTS1)) * np.asarray(
                disk_even_basis_eval(kappa, j, deg, POINTS2)
            ) / norm
        assert np.allclose(disk_parity_kernel_eval(kappa, n, POINTS1, POINTS2), total, rtol=1e-8, atol=1e-8)


def test_parity_kernel_by_reflection():
    """Test that kappa1 != 0 averages the full kernel over v -> -v"""
    n = 3
    full = np.asarray(disk_kernel_eval(KAPPA, n, POINTS1, POINTS2))
    mirrored = np.asarray(disk_kernel_eval(KAPPA, n, POINTS1, (POINTS2[0], -POINTS2[1])))
    assert np.allclose(disk_parity_kernel_eval(KAPPA, n, POINTS1, POINTS2), 0.5 * (full + mirrored))


def test_kernel_parameter_range():
    """Test that kernels need nonnegative reflection exponents"""
    with pytest.raises(InvalidParameterError):
        disk_kernel_eval(DiskWeightParams(kappa1=-0.25, kappa2=0.0, kappa3=0.0), 2, (0.1, 0.1), (0.2, 0.2))


def test_diffop_on_v_squared():
    """Test the operator on v^2 treated as even in v"""
    kappa = DiskWeightParams(kappa1=0.0, kappa2=0.75, kappa3=0.5)
    u = np.array([0.1, -0.3, 0.2])
    v = np.array([0.4, 0.5, 0.7])
    expected = 2.0 * (1.0 - v**2) - 2.0 * (2.0 * kappa.total + 3.0) * v**2 + 4.0 * kappa.kappa2
    assert np.allclose(disk_diffop_apply(kappa, lambda x, y: y * y, (u, v), even_in_v=True), expected)
    assert np.allclose(disk_diffop_apply(kappa, lambda x, y: y * y, (u, v)), expected)


def test_diffop_eigenfunctions():
    """Test the eigenvalue equation with both difference terms"""
    u = np.array([0.2, -0.35, 0.5])
    v = np.array([0.3, 0.45, -0.6])
    for n in range(5):
        lam = disk_eigenvalue(KAPPA, n)
        for j, deg in disk_indices(n):
            f = lambda x, y: disk_basis_eval(KAPPA, j, deg, (x, y))
            applied = np.asarray(disk_diffop_apply(KAPPA, f, (u, v)))
            assert np.allclose(applied, lam * np.asarray(f(u, v)), rtol=1e-8, atol=1e-8)


def test_diffop_near_axis():
    """Test that difference terms refuse points on the reflection axes"""
    with pytest.raises(SingularEvaluationError):
        disk_diffop_apply(KAPPA, lambda x, y: x * x, (1e-4, 0.5))


def test_even_rank():
    """Test that the even subfamily spans n // 2 + 1 dimensions"""
    for n in range(7):
        assert disk_even_rank(KAPPA, n) == n // 2 + 1


def test_even_basis_is_even_in_v():
    """Test the even-in-v basis under reflection"""
    u, v = POINTS1
    for j, n in disk_even_indices(4):
        assert np.allclose(disk_even_basis_eval(KAPPA, j, n, (u, v)), disk_even_basis_eval(KAPPA, j, n, (u, -v)))
    with pytest.raises(IndexOutOfRangeError):
        disk_even_basis_eval(KAPPA, 3, 4, (0.1, 0.1))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_triangle_relation(n):
    """Test the disk-triangle relation for even and odd degrees"""
    rng = np.random.default_rng(3)
    r = np.sqrt(rng.uniform(0.0, 1.0, 40))
    theta = rng.uniform(0.0, 2.0 * np.pi, 40)
    pts = (r * np.cos(theta), r * np.sin(theta))
    for j in range(n // 2 + 1):
        report = disk_triangle_relation_check(KAPPA, j, n, pts)
        assert report.max_deviation < 1e-10
        assert report.constant != 0.0
        assert report.samples == 40


def test_triangle_relation_degenerate():
    """Test that samples where everything vanishes are rejected"""
    with pytest.raises(DegenerateSampleError):
        disk_triangle_relation_check(KAPPA, 0, 1, (np.zeros(3), np.array([0.1, 0.2, 0.3])))
