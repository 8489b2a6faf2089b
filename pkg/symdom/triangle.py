"""
Jacobi polynomials on the reference triangle u >= 0, v >= 0, u + v <= 1
"""

import logging
from functools import lru_cache
from typing import List, Mapping, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from symdom.errors import DomainViolationError, IndexOutOfRangeError, InvalidParameterError, SingularEvaluationError
from symdom.jets import value_of
from symdom.orthopoly1d import (
    gauss_jacobi_rule,
    jacobi,
    jacobi_deriv,
    jacobi_homogeneous,
    points_for_exactness,
    symmetric_rule,
    zn_eval,
)
from symdom.types import JacobiParams, PlanarRule, TriangleWeightParams
from symdom.utils import BOUNDARY_TOL, finish, split_point

logger = logging.getLogger(__name__)


def check_triangle_params(params: TriangleWeightParams, kernel: bool = False) -> None:
    bound = -0.5 if kernel else -1.0
    for name, value in zip(("alpha1", "alpha2", "alpha3"), params.as_tuple()):
        if kernel and value < bound or not kernel and value <= bound:
            op = ">=" if kernel else ">"
            raise InvalidParameterError(f"{name} must be {op} {bound}, got {value}")


def check_in_triangle(u, v) -> None:
    u, v = value_of(u), value_of(v)
    if np.any(u < -BOUNDARY_TOL) or np.any(v < -BOUNDARY_TOL) or np.any(u + v > 1.0 + BOUNDARY_TOL):
        raise DomainViolationError("point lies outside the triangle u >= 0, v >= 0, u + v <= 1")


def triangle_weight(params: TriangleWeightParams, pt):
    """Weight u^alpha1 v^alpha2 (1 - u - v)^alpha3"""
    check_triangle_params(params)
    u, v = split_point(pt, 2)
    check_in_triangle(u, v)
    factors = (np.clip(u, 0.0, None), np.clip(v, 0.0, None), np.clip(1.0 - u - v, 0.0, None))
    out = np.ones(np.broadcast(*factors).shape)
    for base, expo in zip(factors, params.as_tuple()):
        if expo < 0 and np.any(base == 0.0):
            raise SingularEvaluationError("weight has a negative exponent on the boundary")
        out = out * np.power(base, expo)
    return finish(out)


def triangle_norm_const(params: TriangleWeightParams) -> float:
    """Constant b making b * integral of the weight equal to one"""
    check_triangle_params(params)
    a1, a2, a3 = params.as_tuple()
    return float(np.exp(gammaln(params.total + 3.0) - gammaln(a1 + 1.0) - gammaln(a2 + 1.0) - gammaln(a3 + 1.0)))


def triangle_indices(m: int) -> List[Tuple[int, int]]:
    return [(j, m) for j in range(m + 1)]


def _check_index(j: int, m: int) -> None:
    if m < 0 or not 0 <= j <= m:
        raise IndexOutOfRangeError(f"triangle index needs 0 <= j <= m, got j={j}, m={m}")


def _basis(params: TriangleWeightParams, j: int, m: int, u, v):
    a1, a2, a3 = params.as_tuple()
    w = 1.0 - v
    outer = jacobi(m - j, 2.0 * j + a1 + a3 + 1.0, a2, 2.0 * v - 1.0)
    inner = jacobi_homogeneous(j, a3, a1, 2.0 * u - w, w)
    return outer * inner


def triangle_basis_eval(params: TriangleWeightParams, j: int, m: int, pt):
    """
    Evaluate T_{j,m}(u, v)

    (1 - v)^j P_j(2u / (1 - v) - 1) is evaluated in homogenized form, so the
    value at v = 1 is the polynomial limit.

    Args:
        params: Weight exponents
        j: Index 0..m
        m: Total degree
        pt: (u, v) as a tuple or an array with trailing axis 2

    Returns:
        Basis value(s)
    """
    _check_index(j, m)
    u, v = split_point(pt, 2)
    return finish(_basis(params, j, m, u, v))


@lru_cache(maxsize=256)
def _triangle_rule_cached(params: TriangleWeightParams, degree: int) -> PlanarRule:
    a1, a2, a3 = params.as_tuple()
    mx = points_for_exactness(degree)
    rx = gauss_jacobi_rule(mx, JacobiParams(a=a3, b=a1))
    ry = gauss_jacobi_rule(mx, JacobiParams(a=a1 + a3 + 1.0, b=a2))
    x = (1.0 + rx.nodes) / 2.0
    y = (1.0 + ry.nodes) / 2.0
    wx = rx.weights * 2.0 ** (-(a1 + a3 + 1.0))
    wy = ry.weights * 2.0 ** (-(a1 + a2 + a3 + 2.0))
    X, Y = np.meshgrid(x, y, indexing="ij")
    points = np.stack([(X * (1.0 - Y)).ravel(), Y.ravel()], axis=-1)
    weights = np.outer(wx, wy).ravel()
    logger.debug("Triangle rule for %s with %d nodes, exactness %d", params, weights.size, 2 * mx - 1)
    return PlanarRule(points=points, weights=weights, exactness=2 * mx - 1, label=f"triangle {params.as_tuple()}")


def triangle_quadrature(params: TriangleWeightParams, degree: int) -> PlanarRule:
    """Collapsed Gauss-Jacobi product rule for the triangle weight"""
    check_triangle_params(params)
    if degree < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {degree}")
    return _triangle_rule_cached(params, int(degree))


@lru_cache(maxsize=1024)
def triangle_basis_norm(params: TriangleWeightParams, j: int, m: int) -> float:
    """Squared norm b * integral of T_{j,m}^2 times the weight"""
    _check_index(j, m)
    rule = triangle_quadrature(params, 2 * m)
    u, v = rule.coords()
    return rule.mean(_basis(params, j, m, u, v) ** 2)


def triangle_orthonormal_eval(params: TriangleWeightParams, j: int, m: int, pt):
    return finish(triangle_basis_eval(params, j, m, pt) / np.sqrt(triangle_basis_norm(params, j, m)))


def triangle_kernel_eval(params: TriangleWeightParams, n: int, pt1, pt2, rule_res: Optional[int] = None):
    """
    Reproducing kernel of the degree-n orthogonal space, by its integral formula

    Each t_i axis carries the normalized (1 - t^2)^(alpha_i - 1/2) measure,
    replaced by the half-endpoint average when alpha_i = -1/2.
    """
    check_triangle_params(params, kernel=True)
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    if rule_res is None:
        rule_res = max(n + 2, -(-n // 2) + 4)
    if rule_res < n + 2:
        raise InvalidParameterError(f"rule_res must be at least n + 2 = {n + 2}, got {rule_res}")
    u1, u2 = split_point(pt1, 2)
    v1, v2 = split_point(pt2, 2)
    check_in_triangle(u1, u2)
    check_in_triangle(v1, v2)
    if n == 0:
        return finish(np.ones(np.broadcast(u1, v1).shape))
    c = [
        np.sqrt(np.clip(u1 * v1, 0.0, None)),
        np.sqrt(np.clip(u2 * v2, 0.0, None)),
        np.sqrt(np.clip((1.0 - u1 - u2) * (1.0 - v1 - v2), 0.0, None)),
    ]
    rules = [symmetric_rule(alpha, rule_res) for alpha in params.as_tuple()]
    t1, t2, t3 = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    w = np.einsum("i,j,k->ijk", *[r.weights for r in rules])
    arg = c[0][..., None, None, None] * t1 + c[1][..., None, None, None] * t2 + c[2][..., None, None, None] * t3
    values = zn_eval(2 * n, params.total + 2.0, arg)
    return finish(np.sum(values * w, axis=(-3, -2, -1)))


def triangle_kernel_sum(params: TriangleWeightParams, n: int, pt1, pt2):
    """Reproducing kernel as a sum over the orthonormalized basis"""
    total = 0.0
    for j, m in triangle_indices(n):
        total = total + triangle_orthonormal_eval(params, j, m, pt1) * triangle_orthonormal_eval(params, j, m, pt2)
    return finish(total)


def _basis_partials(params: TriangleWeightParams, j: int, m: int, u: np.ndarray, v: np.ndarray):
    a1, a2, a3 = params.as_tuple()
    outer_p = JacobiParams(a=2.0 * j + a1 + a3 + 1.0, b=a2)
    inner_p = JacobiParams(a=a3, b=a1)
    y = 2.0 * v - 1.0
    A = jacobi(m - j, outer_p.a, outer_p.b, y)
    A1 = 2.0 * np.asarray(jacobi_deriv(m - j, outer_p, y, 1))
    A2 = 4.0 * np.asarray(jacobi_deriv(m - j, outer_p, y, 2))

    w = 1.0 - v
    x = 2.0 * u / w - 1.0
    P = jacobi(j, inner_p.a, inner_p.b, x)
    P1 = np.asarray(jacobi_deriv(j, inner_p, x, 1))
    P2 = np.asarray(jacobi_deriv(j, inner_p, x, 2))

    def wp(k: int) -> np.ndarray:
        return np.power(w, float(k))

    B = wp(j) * P
    Bu = 2.0 * wp(j - 1) * P1
    Buu = 4.0 * wp(j - 2) * P2
    Bv = -j * wp(j - 1) * P + 2.0 * u * wp(j - 2) * P1
    Buv = -2.0 * (j - 1) * wp(j - 2) * P1 + 4.0 * u * wp(j - 3) * P2
    Bvv = j * (j - 1) * wp(j - 2) * P - 4.0 * (j - 1) * u * wp(j - 3) * P1 + 4.0 * u * u * wp(j - 4) * P2

    T = A * B
    Tu = A * Bu
    Tv = A1 * B + A * Bv
    Tuu = A * Buu
    Tuv = A1 * Bu + A * Buv
    Tvv = A2 * B + 2.0 * A1 * Bv + A * Bvv
    return T, Tu, Tv, Tuu, Tuv, Tvv


def triangle_diffop_apply(params: TriangleWeightParams, poly: Mapping[Tuple[int, int], float], pt):
    """
    Apply the triangle operator to a polynomial given by T-basis coefficients

    Args:
        params: Weight exponents
        poly: Coefficients keyed by (j, m)
        pt: Interior point(s)

    Returns:
        Operator value(s) at pt
    """
    check_triangle_params(params)
    u, v = split_point(pt, 2)
    u = np.asarray(value_of(u))
    v = np.asarray(value_of(v))
    if np.any(u <= 0.0) or np.any(v <= 0.0) or np.any(u + v >= 1.0):
        raise DomainViolationError("operator evaluation needs interior points of the triangle")
    a1, a2, _ = params.as_tuple()
    lam = params.total + 3.0
    total = np.zeros(np.broadcast(u, v).shape)
    for (j, m), coef in poly.items():
        _check_index(j, m)
        if coef == 0.0:
            continue
        _, Tu, Tv, Tuu, Tuv, Tvv = _basis_partials(params, j, m, u, v)
        total = total + coef * (
            u * (1.0 - u) * Tuu
            - 2.0 * u * v * Tuv
            + v * (1.0 - v) * Tvv
            + (a1 + 1.0 - lam * u) * Tu
            + (a2 + 1.0 - lam * v) * Tv
        )
    return finish(total)


def triangle_eigenvalue(params: TriangleWeightParams, m: int) -> float:
    return -m * (m + params.total + 2.0)
