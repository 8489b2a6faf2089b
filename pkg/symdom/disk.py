"""
Orthogonal polynomials on the unit disk for |u|^(2k1) |v|^(2k2) (1 - u^2 - v^2)^k3
"""

import logging
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from symdom.errors import (
    DegenerateSampleError,
    DomainViolationError,
    IndexOutOfRangeError,
    InvalidParameterError,
    SingularEvaluationError,
)
from symdom.jets import partials, value_of
from symdom.orthopoly1d import gen_gegenbauer_rule, gen_gegenbauer_scaled, points_for_exactness, skewed_rule, symmetric_rule, zn_eval
from symdom.triangle import triangle_basis_eval
from symdom.types import DiskWeightParams, GenGegenbauerParams, PlanarRule, RelationReport, TriangleWeightParams
from symdom.utils import BOUNDARY_TOL, finish, make_rng, split_point

logger = logging.getLogger(__name__)

# Difference terms [f(u,v) - f(-u,v)] / u^2 are only evaluated this far from the axes
DIFFERENCE_MIN = 1e-3


def check_disk_params(params: DiskWeightParams, kernel: bool = False) -> None:
    k1, k2, k3 = params.kappa1, params.kappa2, params.kappa3
    if kernel:
        if k1 < 0 or k2 < 0 or k3 < -0.5:
            raise InvalidParameterError(f"disk kernel needs kappa1, kappa2 >= 0 and kappa3 >= -1/2, got {params}")
    elif not (k1 > -0.5 and k2 > -0.5 and k3 > -1.0):
        raise InvalidParameterError(f"disk weight needs kappa1, kappa2 > -1/2 and kappa3 > -1, got {params}")


def check_in_disk(u, v) -> None:
    if np.any(value_of(u) ** 2 + value_of(v) ** 2 > 1.0 + BOUNDARY_TOL):
        raise DomainViolationError("point lies outside the unit disk")


def disk_weight(params: DiskWeightParams, pt):
    check_disk_params(params)
    u, v = split_point(pt, 2)
    check_in_disk(u, v)
    rest = np.clip(1.0 - u * u - v * v, 0.0, None)
    for base, expo in ((np.abs(u), params.kappa1), (np.abs(v), params.kappa2), (rest, params.kappa3)):
        if expo < 0 and np.any(base == 0.0):
            raise SingularEvaluationError("disk weight has a negative exponent at a zero factor")
    return finish(np.abs(u) ** (2 * params.kappa1) * np.abs(v) ** (2 * params.kappa2) * rest**params.kappa3)


def _check_index(j: int, n: int) -> None:
    if n < 0 or not 0 <= j <= n:
        raise IndexOutOfRangeError(f"disk index needs 0 <= j <= n, got j={j}, n={n}")


def disk_indices(n: int) -> List[Tuple[int, int]]:
    return [(j, n) for j in range(n + 1)]


def _basis(params: DiskWeightParams, j: int, n: int, u, v):
    k1, k2, k3 = params.kappa1, params.kappa2, params.kappa3
    outer = gen_gegenbauer_scaled(n - j, j + k1 + k3 + 1.0, k2, v, 1.0)
    inner = gen_gegenbauer_scaled(j, k3 + 0.5, k1, u, 1.0 - v * v)
    return outer * inner


def disk_basis_eval(params: DiskWeightParams, j: int, n: int, pt):
    """
    Evaluate G_{j,n}(u, v) = C_{n-j}(v) (1 - v^2)^(j/2) C_j(u / sqrt(1 - v^2))

    The second factor is evaluated as a polynomial in (u, 1 - v^2), so |v| = 1
    is covered by the same formula.
    """
    check_disk_params(params)
    _check_index(j, n)
    u, v = split_point(pt, 2)
    return finish(_basis(params, j, n, u, v))


@lru_cache(maxsize=256)
def _disk_rule_cached(params: DiskWeightParams, degree: int, half: bool) -> PlanarRule:
    m = points_for_exactness(degree, per_node=4)
    rv = gen_gegenbauer_rule(m, GenGegenbauerParams(lam=params.kappa1 + params.kappa3 + 1.0, mu=params.kappa2))
    rx = gen_gegenbauer_rule(m, GenGegenbauerParams(lam=params.kappa3 + 0.5, mu=params.kappa1))
    vn, wv = rv.nodes, rv.weights
    if half:
        keep = vn > 0
        vn, wv = vn[keep], wv[keep]
    V, X = np.meshgrid(vn, rx.nodes, indexing="ij")
    U = np.sqrt(1.0 - V**2) * X
    points = np.stack([U.ravel(), V.ravel()], axis=-1)
    weights = np.outer(wv, rx.weights).ravel()
    label = f"{'half-' if half else ''}disk {params.kappa1, params.kappa2, params.kappa3}"
    logger.debug("Built %s rule with %d nodes", label, weights.size)
    return PlanarRule(points=points, weights=weights, exactness=4 * m - 1, label=label)


def disk_quadrature(params: DiskWeightParams, degree: int) -> PlanarRule:
    """Product of two generalized Gegenbauer rules under u = sqrt(1 - v^2) x"""
    check_disk_params(params)
    if degree < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {degree}")
    return _disk_rule_cached(params, int(degree), False)


def half_disk_quadrature(params: DiskWeightParams, degree: int) -> PlanarRule:
    """Upper half (v > 0) of the disk rule; exact for polynomials even in v"""
    check_disk_params(params)
    if degree < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {degree}")
    return _disk_rule_cached(params, int(degree), True)


@lru_cache(maxsize=2048)
def disk_basis_norm(params: DiskWeightParams, j: int, n: int) -> float:
    _check_index(j, n)
    rule = disk_quadrature(params, 2 * n)
    u, v = rule.coords()
    return rule.mean(_basis(params, j, n, u, v) ** 2)


def disk_orthonormal_eval(params: DiskWeightParams, j: int, n: int, pt):
    return finish(disk_basis_eval(params, j, n, pt) / np.sqrt(disk_basis_norm(params, j, n)))


def _boundary_factor(u1, u2, v1, v2):
    return np.sqrt(np.clip(1.0 - u1 * u1 - u2 * u2, 0.0, None) * np.clip(1.0 - v1 * v1 - v2 * v2, 0.0, None))


def disk_kernel_eval(params: DiskWeightParams, n: int, pt1, pt2, rule_res: Optional[int] = None):
    """
    Reproducing kernel of the degree-n space by the triple integral formula

    kappa1 = 0 or kappa2 = 0 use the right-endpoint mass, kappa3 = -1/2 the
    half-endpoint average.
    """
    check_disk_params(params, kernel=True)
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    u1, u2 = split_point(pt1, 2)
    v1, v2 = split_point(pt2, 2)
    check_in_disk(u1, u2)
    check_in_disk(v1, v2)
    if n == 0:
        return finish(np.ones(np.broadcast(u1, v1).shape))
    m = rule_res if rule_res is not None else n // 2 + 2
    rules = [skewed_rule(params.kappa1, m), skewed_rule(params.kappa2, m), symmetric_rule(params.kappa3, m)]
    t1, t2, t3 = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    w = np.einsum("i,j,k->ijk", *[r.weights for r in rules])
    c1 = (u1 * v1)[..., None, None, None]
    c2 = (u2 * v2)[..., None, None, None]
    c3 = _boundary_factor(u1, u2, v1, v2)[..., None, None, None]
    values = zn_eval(n, params.total + 1.0, c1 * t1 + c2 * t2 + c3 * t3)
    return finish(np.sum(values * w, axis=(-3, -2, -1)))


def disk_parity_kernel_eval(params: DiskWeightParams, n: int, pt1, pt2, rule_res: Optional[int] = None):
    """
    Reproducing kernel of the degree-n polynomials even in v

    With kappa1 = 0 the two-integral formula is used, otherwise the average
    of the full kernel over the reflection v -> -v of the second point.
    """
    check_disk_params(params, kernel=True)
    v1, v2 = split_point(pt2, 2)
    if params.kappa1 != 0.0:
        full = disk_kernel_eval(params, n, pt1, (v1, v2), rule_res)
        mirrored = disk_kernel_eval(params, n, pt1, (v1, -v2), rule_res)
        return finish(0.5 * (np.asarray(full) + np.asarray(mirrored)))
    u1, u2 = split_point(pt1, 2)
    check_in_disk(u1, u2)
    check_in_disk(v1, v2)
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    if n == 0:
        return finish(np.ones(np.broadcast(u1, v1).shape))
    m = rule_res if rule_res is not None else n // 2 + 2
    r2 = symmetric_rule(params.kappa2 - 0.5, m)
    r3 = symmetric_rule(params.kappa3, m)
    t2, t3 = np.meshgrid(r2.nodes, r3.nodes, indexing="ij")
    w = np.outer(r2.weights, r3.weights)
    c1 = (u1 * v1)[..., None, None]
    c2 = (u2 * v2)[..., None, None]
    c3 = _boundary_factor(u1, u2, v1, v2)[..., None, None]
    values = zn_eval(n, params.total + 1.0, c1 + c2 * t2 + c3 * t3)
    return finish(np.sum(values * w, axis=(-2, -1)))


def disk_kernel_sum(params: DiskWeightParams, n: int, pt1, pt2):
    total = 0.0
    for j, deg in disk_indices(n):
        total = total + disk_orthonormal_eval(params, j, deg, pt1) * disk_orthonormal_eval(params, j, deg, pt2)
    return finish(total)


def disk_eigenvalue(params: DiskWeightParams, n: int) -> float:
    return -n * (n + 2.0 * params.total + 2.0)


def disk_diffop_apply(params: DiskWeightParams, f: Callable, pt, even_in_v: bool = False):
    """
    Apply the disk differential-difference operator

    Args:
        params: Weight exponents
        f: Callable f(u, v) built from arithmetic and symdom.jets functions
        pt: Interior point(s)
        even_in_v: Treat f as even in v, so the v difference term becomes 2 k2 f_v / v

    Returns:
        Operator value(s)
    """
    check_disk_params(params)
    u, v = split_point(pt, 2)
    u, v = np.asarray(value_of(u)), np.asarray(value_of(v))
    check_in_disk(u, v)
    val, grad, hess = partials(f, u, v)
    fu, fv = grad[..., 0], grad[..., 1]
    fuu, fuv, fvv = hess[..., 0, 0], hess[..., 0, 1], hess[..., 1, 1]
    out = (
        (1.0 - u * u) * fuu
        - 2.0 * u * v * fuv
        + (1.0 - v * v) * fvv
        - (2.0 * params.total + 3.0) * (u * fu + v * fv)
    )
    if params.kappa1 != 0.0:
        if np.any(np.abs(u) < DIFFERENCE_MIN):
            raise SingularEvaluationError(f"u-difference term needs |u| >= {DIFFERENCE_MIN}")
        mirrored = np.asarray(f(-u, v), dtype=float)
        out = out + params.kappa1 * (2.0 * fu / u - (val - mirrored) / (u * u))
    if params.kappa2 != 0.0:
        if even_in_v:
            if np.any(v == 0.0):
                raise SingularEvaluationError("2 kappa2 f_v / v is undefined at v = 0")
            out = out + 2.0 * params.kappa2 * fv / v
        else:
            if np.any(np.abs(v) < DIFFERENCE_MIN):
                raise SingularEvaluationError(f"v-difference term needs |v| >= {DIFFERENCE_MIN}")
            mirrored = np.asarray(f(u, -v), dtype=float)
            out = out + params.kappa2 * (2.0 * fv / v - (val - mirrored) / (v * v))
    return finish(out)


def disk_even_indices(n: int) -> List[Tuple[int, int]]:
    return [(j, n) for j in range(n // 2 + 1)]


def disk_even_basis_eval(params: DiskWeightParams, j: int, n: int, pt):
    """
    Orthogonal basis of the degree-n polynomials even in v

    G_{2j,n} with the roles of u and v exchanged:
    C_{n-2j}^{(2j+k2+k3+1, k1)}(u) (1 - u^2)^j C_{2j}^{(k3+1/2, k2)}(v / sqrt(1 - u^2)).
    """
    if not 0 <= j <= n // 2:
        raise IndexOutOfRangeError(f"even-in-v index needs 0 <= j <= n // 2, got j={j}, n={n}")
    u, v = split_point(pt, 2)
    return disk_basis_eval(params.swapped(), 2 * j, n, (v, u))


def disk_even_rank(params: DiskWeightParams, n: int, samples: int = 64, seed: int = 0, tol: float = 1e-10) -> int:
    """Numerical rank of {G_{2j,n}} sampled at random disk points"""
    rng = make_rng(seed)
    r = np.sqrt(rng.uniform(0.0, 1.0, samples))
    theta = rng.uniform(0.0, 2.0 * np.pi, samples)
    u, v = r * np.cos(theta), r * np.sin(theta)
    columns = [np.asarray(disk_basis_eval(params, 2 * j, n, (u, v))) for j in range(n // 2 + 1)]
    matrix = np.stack(columns, axis=-1)
    matrix = matrix / np.max(np.abs(matrix), axis=0)
    return int(np.linalg.matrix_rank(matrix, tol=tol * samples))


def disk_triangle_relation_check(params: DiskWeightParams, j: int, n: int, pts) -> RelationReport:
    """
    Fit G_{2j+(n mod 2), n}(u, v) against T_{j,m}(u^2, v^2), times u when n is odd

    The triangle exponents are (k1 - 1/2, k2 - 1/2, k3) for even n and
    (k1 + 1/2, k2 - 1/2, k3) for odd n, with m = n // 2.
    """
    check_disk_params(params)
    m = n // 2
    if not 0 <= j <= m:
        raise IndexOutOfRangeError(f"relation index needs 0 <= j <= n // 2, got j={j}, n={n}")
    odd = n % 2
    u, v = split_point(pts, 2)
    tri = TriangleWeightParams(
        alpha1=params.kappa1 + (0.5 if odd else -0.5),
        alpha2=params.kappa2 - 0.5,
        alpha3=params.kappa3,
    )
    lhs = np.asarray(disk_basis_eval(params, 2 * j + odd, n, (u, v)), dtype=float).ravel()
    rhs = np.asarray(triangle_basis_eval(tri, j, m, (u * u, v * v)), dtype=float).ravel()
    if odd:
        rhs = rhs * np.asarray(u, dtype=float).ravel()
    denom = float(np.dot(rhs, rhs))
    scale = float(np.max(np.abs(lhs))) if lhs.size else 0.0
    if denom == 0.0 or scale == 0.0:
        raise DegenerateSampleError("all sampled values vanish; the relation constant is undetermined")
    constant = float(np.dot(lhs, rhs) / denom)
    deviation = float(np.max(np.abs(lhs - constant * rhs)) / scale)
    return RelationReport(constant=constant, max_deviation=deviation, samples=int(lhs.size))
