"""
Planar domains bounded by two quadratic curves

Omega = {a + (c - a) u^2 <= v^2 <= b + (c - b) u^2, |u| <= 1} with
0 <= a < b and c >= 0, and its upper half Lambda (v >= 0). The map
psi(u, v) = (u, t(u, v)) carries Lambda onto the upper half disk and
transports weights, bases, kernels and the spectral operator from the disk.
"""

import logging
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np

from symdom import jets
from symdom.base import EvenSpace
from symdom.disk import (
    disk_diffop_apply,
    disk_even_basis_eval,
    disk_parity_kernel_eval,
    half_disk_quadrature,
)
from symdom.errors import DomainViolationError, IndexOutOfRangeError, InvalidParameterError, SingularEvaluationError
from symdom.jets import partials, value_of
from symdom.orthopoly1d import gen_gegenbauer_const, gen_gegenbauer_scaled, jacobi_homogeneous
from symdom.types import CurvedWeightParams, DomainParams, PlanarRule
from symdom.utils import BOUNDARY_TOL, finish, split_point

logger = logging.getLogger(__name__)

RADICAND_TOL = 1e-14
V_MIN = 0.05


def check_domain(dp: DomainParams) -> None:
    if not (0.0 <= dp.a < dp.b):
        raise InvalidParameterError(f"domain needs 0 <= a < b, got a={dp.a}, b={dp.b}")
    if dp.c < 0.0:
        raise InvalidParameterError(f"domain needs c >= 0, got c={dp.c}")


def check_curved_params(params: CurvedWeightParams, spectral: bool = False) -> None:
    if not (params.kappa1 > -0.5 and params.kappa2 > -0.5 and params.kappa3 > -1.0):
        raise InvalidParameterError(f"curved weight needs kappa1, kappa2 > -1/2 and kappa3 > -1, got {params}")
    if spectral and params.kappa1 != 0.0:
        raise InvalidParameterError(f"spectral operations need kappa1 = 0, got {params.kappa1}")


def domain_contains(dp: DomainParams, pt, half: bool = False, tol: float = BOUNDARY_TOL):
    """Membership in the closed domain, or its upper half"""
    check_domain(dp)
    u, v = split_point(pt, 2)
    u, v = value_of(u), value_of(v)
    u2, v2 = u * u, v * v
    inside = (u2 <= 1.0 + tol) & (v2 >= dp.a + (dp.c - dp.a) * u2 - tol) & (v2 <= dp.b + (dp.c - dp.b) * u2 + tol)
    if half:
        inside = inside & (v >= -tol)
    if np.ndim(inside) == 0:
        return bool(inside)
    return inside


def z_affine(dp: DomainParams, pt) -> Tuple:
    """Affine map of the triangle with vertices (0,a), (0,b), (1,c) onto the reference triangle"""
    check_domain(dp)
    u, v = split_point(pt, 2)
    return finish(u), finish((-dp.a + (dp.a - dp.c) * u + v) / (dp.b - dp.a))


def z_affine_inv(dp: DomainParams, pt) -> Tuple:
    check_domain(dp)
    s, t = split_point(pt, 2)
    return finish(s), finish((dp.b - dp.a) * t + dp.a + (dp.c - dp.a) * s)


def _radicand(dp: DomainParams, u, v):
    return (-dp.a + (dp.a - dp.c) * u * u + v * v) / (dp.b - dp.a)


def frakt(dp: DomainParams, pt):
    """
    t(u, v) = sqrt((-a + (a - c) u^2 + v^2) / (b - a))

    Radicands in [-1e-14, 0) are clamped to zero; anything lower is outside
    the domain.
    """
    check_domain(dp)
    u, v = split_point(pt, 2)
    r = _radicand(dp, u, v)
    rv = value_of(r)
    if np.any(rv < -RADICAND_TOL):
        raise DomainViolationError("point lies below the lower curve v^2 = a + (c - a) u^2")
    if jets.is_jet(r):
        return jets.sqrt(r)
    return finish(np.sqrt(np.clip(rv, 0.0, None)))


def psi(dp: DomainParams, pt) -> Tuple:
    """Bijection (u, v) -> (u, t(u, v)) of the upper half onto the upper half disk"""
    u, v = split_point(pt, 2)
    if not np.all(domain_contains(dp, (u, v), half=True)):
        raise DomainViolationError(f"point lies outside the upper half of the domain {dp.a, dp.b, dp.c}")
    return finish(u), frakt(dp, (u, v))


def psi_inv(dp: DomainParams, pt) -> Tuple:
    """Inverse (s, t) -> (s, sqrt((b - a) t^2 + a + (c - a) s^2))"""
    check_domain(dp)
    s, t = split_point(pt, 2)
    sv, tv = value_of(s), value_of(t)
    if np.any(sv * sv + tv * tv > 1.0 + BOUNDARY_TOL) or np.any(tv < -BOUNDARY_TOL):
        raise DomainViolationError("point lies outside the upper half disk")
    r = (dp.b - dp.a) * t * t + dp.a + (dp.c - dp.a) * s * s
    if jets.is_jet(r):
        return s, jets.sqrt(r)
    return finish(s), finish(np.sqrt(np.clip(r, 0.0, None)))


def curved_weight(dp: DomainParams, params: CurvedWeightParams, pt):
    """|v| |u|^(2 k1) z^(k2 - 1/2) y3^k3 with z = t(u, v)^2 and y3 = (b - (b - c) u^2 - v^2) / (b - a)"""
    check_domain(dp)
    check_curved_params(params)
    u, v = split_point(pt, 2)
    if not np.all(domain_contains(dp, (u, v))):
        raise DomainViolationError("point lies outside the domain")
    z = np.clip(_radicand(dp, u, v), 0.0, None)
    y3 = np.clip((dp.b - (dp.b - dp.c) * u * u - v * v) / (dp.b - dp.a), 0.0, None)
    k1, k2, k3 = params.kappa1, params.kappa2, params.kappa3
    for base, expo in ((np.abs(u), 2 * k1), (z, k2 - 0.5), (y3, k3)):
        if expo < 0 and np.any(base == 0.0):
            raise SingularEvaluationError("curved weight has a negative exponent at a zero factor")
    return finish(np.abs(v) * np.abs(u) ** (2 * k1) * z ** (k2 - 0.5) * y3**k3)


@lru_cache(maxsize=256)
def lambda_quadrature(dp: DomainParams, params: CurvedWeightParams, degree: int) -> PlanarRule:
    """
    Rule on the upper half pulled back from the half-disk rule

    Integrals of f W over the upper half equal (b - a) times integrals of
    f o psi^{-1} against the disk weight over the upper half disk.
    """
    check_domain(dp)
    check_curved_params(params)
    if degree < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {degree}")
    disk_rule = half_disk_quadrature(params.disk(), degree)
    s, t = disk_rule.coords()
    u, v = psi_inv(dp, (s, t))
    return PlanarRule(
        points=np.stack([u, v], axis=-1),
        weights=disk_rule.weights * (dp.b - dp.a),
        exactness=disk_rule.exactness,
        label=f"curved {dp.a, dp.b, dp.c}",
    )


def _check_q_index(j: int, n: int) -> None:
    if n < 0 or not 0 <= j <= n // 2:
        raise IndexOutOfRangeError(f"curved basis index needs 0 <= j <= n // 2, got j={j}, n={n}")


def q_indices(n: int) -> List[Tuple[int, int]]:
    return [(j, n) for j in range(n // 2 + 1)]


def q_basis_eval(dp: DomainParams, params: CurvedWeightParams, j: int, n: int, pt):
    """
    Orthogonal basis Q_{j,n} = G_{2j,n} o psi of the degree-n polynomials even in v

    Points with v < 0 are reflected to |v|.
    """
    check_curved_params(params)
    _check_q_index(j, n)
    u, v = split_point(pt, 2)
    s, t = psi(dp, (u, abs(v)))
    return disk_even_basis_eval(params.disk(), j, n, (s, t))


def q_basis_eval_direct(dp: DomainParams, params: CurvedWeightParams, j: int, n: int, pt):
    """
    Q_{j,n} from its Jacobi form

    C_{n-2j}^{(2j+k2+k3+1, k1)}(u) (k2+k3+1/2)_j / (k2+1/2)_j (limit form at k2+k3 = -1/2)
    (1 - u^2)^j P_j^{(k3, k2-1/2)}(2 z / (1 - u^2) - 1), z = t(u, v)^2,
    evaluated without square roots.
    """
    check_domain(dp)
    check_curved_params(params)
    _check_q_index(j, n)
    u, v = split_point(pt, 2)
    k1, k2, k3 = params.kappa1, params.kappa2, params.kappa3
    z = _radicand(dp, u, v)
    r2 = 1.0 - u * u
    outer = gen_gegenbauer_scaled(n - 2 * j, 2 * j + k2 + k3 + 1.0, k1, u, 1.0)
    const = gen_gegenbauer_const(k3 + 0.5, k2, j)
    return finish(outer * const * jacobi_homogeneous(j, k3, k2 - 0.5, 2.0 * z - r2, r2))


@lru_cache(maxsize=2048)
def q_basis_norm(dp: DomainParams, params: CurvedWeightParams, j: int, n: int) -> float:
    rule = lambda_quadrature(dp, params, 2 * n)
    return rule.mean(np.asarray(q_basis_eval_direct(dp, params, j, n, rule.coords())) ** 2)


def q_orthonormal_eval(dp: DomainParams, params: CurvedWeightParams, j: int, n: int, pt):
    return finish(q_basis_eval(dp, params, j, n, pt) / np.sqrt(q_basis_norm(dp, params, j, n)))


def curved_eigenvalue(params: CurvedWeightParams, n: int) -> float:
    return -n * (n + 2.0 * params.kappa2 + 2.0 * params.kappa3 + 2.0)


def _check_operator_point(dp: DomainParams, u, v, v_min: float) -> None:
    if np.any(v < v_min):
        raise SingularEvaluationError(f"operator evaluation needs v >= {v_min}")
    if not np.all(domain_contains(dp, (u, v), half=True)):
        raise DomainViolationError("operator evaluation needs points of the upper half")


def curved_diffop_apply(dp: DomainParams, params: CurvedWeightParams, f: Callable, pt, v_min: float = V_MIN):
    """
    Apply the spectral operator of the curved domain by pulling back the disk operator

    Args:
        dp: Domain shape
        params: Weight exponents with kappa1 = 0
        f: Callable f(u, v) built from arithmetic and symdom.jets functions
        pt: Point(s) of the upper half with v >= v_min
        v_min: Smallest admissible v

    Returns:
        Operator value(s)
    """
    check_domain(dp)
    check_curved_params(params, spectral=True)
    u, v = split_point(pt, 2)
    u, v = np.asarray(value_of(u)), np.asarray(value_of(v))
    _check_operator_point(dp, u, v, v_min)
    s, t = psi(dp, (u, v))
    if params.kappa2 != 0.0 and np.any(np.asarray(t) < 1e-8):
        raise SingularEvaluationError("operator is singular on the lower curve when kappa2 != 0")

    def pulled(ss, tt):
        return f(*psi_inv(dp, (ss, tt)))

    return disk_diffop_apply(params.disk(), pulled, (s, t), even_in_v=True)


def curved_diffop_apply_direct(dp: DomainParams, params: CurvedWeightParams, f: Callable, pt, v_min: float = V_MIN):
    """Rational-coefficient form of the curved-domain operator"""
    check_domain(dp)
    check_curved_params(params, spectral=True)
    u, v = split_point(pt, 2)
    u, v = np.asarray(value_of(u)), np.asarray(value_of(v))
    _check_operator_point(dp, u, v, v_min)
    a, b, c = dp.a, dp.b, dp.c
    _, grad, hess = partials(f, u, v)
    fu, fv = grad[..., 0], grad[..., 1]
    fuu, fuv, fvv = hess[..., 0, 0], hess[..., 0, 1], hess[..., 1, 1]
    lam = 2.0 * (params.kappa2 + params.kappa3) + 3.0
    q = (-a * b + (a - c) * (b - c) * u * u) / (v * v)
    out = (
        (1.0 - u * u) * fuu
        - 2.0 * (v * v - c) * u / v * fuv
        + (a + b - v * v + q) * fvv
        + (c - 2.0 * a - q) / v * fv
        - lam * (u * fu + (v * v - a) / v * fv)
        + 2.0 * params.kappa2 * (b - a) / v * fv
    )
    return finish(out)


def curved_kernel_eval(dp: DomainParams, params: CurvedWeightParams, n: int, pt1, pt2, rule_res: Optional[int] = None):
    """
    Kernel of the degree-n even space, pulled back from the disk

    Both points are reflected to |v|, as the basis is.
    """
    check_curved_params(params, spectral=True)
    u1, v1 = split_point(pt1, 2)
    u2, v2 = split_point(pt2, 2)
    s1 = psi(dp, (u1, np.abs(v1)))
    s2 = psi(dp, (u2, np.abs(v2)))
    return disk_parity_kernel_eval(params.disk(), n, s1, s2, rule_res)


def curved_kernel_sum(dp: DomainParams, params: CurvedWeightParams, n: int, pt1, pt2):
    total = 0.0
    for j, deg in q_indices(n):
        total = total + q_orthonormal_eval(dp, params, j, deg, pt1) * q_orthonormal_eval(dp, params, j, deg, pt2)
    return finish(total)


def lambda_sample(dp: DomainParams, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples on the upper half by rejection from its bounding box"""
    check_domain(dp)
    vmax = float(np.sqrt(max(dp.b, dp.c)))
    out: List[np.ndarray] = []
    have = 0
    while have < count:
        batch = max(64, 2 * (count - have))
        cand = np.stack([rng.uniform(-1.0, 1.0, batch), rng.uniform(0.0, vmax, batch)], axis=-1)
        keep = cand[domain_contains(dp, cand, half=True, tol=0.0)]
        out.append(keep)
        have += len(keep)
    return np.concatenate(out)[:count]


class CurvedSpace(EvenSpace):
    """Even-in-v orthonormal polynomials for W^{0,beta,gamma} on a curved planar domain"""

    name = "curved2d"
    dim = 2

    def __init__(self, domain: DomainParams, beta: float, gamma: float):
        check_domain(domain)
        self.domain = domain
        self.beta = beta
        self.gamma = gamma
        self.params = CurvedWeightParams.spectral(beta, gamma)
        check_curved_params(self.params, spectral=True)

    def indices(self, n: int) -> List[Tuple[int, ...]]:
        return [(n, j) for j in range(n // 2 + 1)]

    def evaluate(self, index: Tuple[int, ...], pts) -> np.ndarray:
        n, j = index
        return q_orthonormal_eval(self.domain, self.params, j, n, pts)

    def rule(self, degree: int) -> PlanarRule:
        return lambda_quadrature(self.domain, self.params, degree)

    def eigenvalue(self, n: int) -> float:
        return curved_eigenvalue(self.params, n)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return lambda_sample(self.domain, count, rng)
