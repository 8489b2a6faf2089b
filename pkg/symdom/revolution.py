"""
Domains of revolution in three dimensions

The solid {(x, t) : (|x|, t) in Omega_{a,b,c}} with x in R^2 is carried by
psi(x, t) = (x, t(|x|, t)) onto the unit ball, so its orthogonal
polynomials, kernels and spectral operator come from the weighted ball
|y3|^(2 beta) (1 - |y|^2)^gamma. Polynomials of the even class (even in t)
are the ones that survive on the upper half.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.special import comb

from symdom import jets
from symdom.base import EvenSpace
from symdom.curved2d import check_domain
from symdom.errors import (
    DomainViolationError,
    IndexOutOfRangeError,
    InvalidCutoffError,
    InvalidParameterError,
    SingularEvaluationError,
)
from symdom.jets import partials, value_of
from symdom.orthopoly1d import (
    gauss_jacobi_rule,
    gen_gegenbauer_rule,
    gen_gegenbauer_scaled,
    jacobi_homogeneous,
    points_for_exactness,
    skewed_rule,
    symmetric_rule,
    zn_table,
)
from symdom.triangle import triangle_basis_eval
from symdom.types import (
    BallWeightParams,
    DomainParams,
    GenGegenbauerParams,
    JacobiParams,
    PlanarRule,
    RevBasisIndex,
    TriangleWeightParams,
)
from symdom.utils import BOUNDARY_TOL, clamp_unit, finish, split_point

logger = logging.getLogger(__name__)

RADICAND_TOL = 1e-14
T_MIN = 0.05
DIFFERENCE_MIN = 1e-3

IndexLike = Union[RevBasisIndex, Tuple[int, ...]]


class AngularOp(str, Enum):
    """First-order operators on the cone family a = 0, b = 1"""

    D_IJ = "D_ij"
    FRAK_D_I = "frakD_i"
    FRAK_D_3 = "frakD_3"
    FRAK_D_I3 = "frakD_i3"
    PHI_C = "phi_c"


def dim_harmonics(k: int, d: int = 2) -> int:
    """Dimension of the spherical harmonics of degree k in d variables"""
    if k < 0:
        return 0
    return int(comb(k + d - 1, k, exact=True) - comb(k + d - 3, k - 2, exact=True))


def check_ball_params(bw: BallWeightParams, kernel: bool = False) -> None:
    if bw.beta < 0.0 or bw.gamma <= -1.0:
        raise InvalidParameterError(f"ball weight needs beta >= 0 and gamma > -1, got {bw}")
    if kernel and bw.gamma < -0.5:
        raise InvalidParameterError(f"ball kernel needs gamma >= -1/2, got {bw.gamma}")


def circle_harmonic_eval(k: int, ell: int, x):
    """
    Solid circle harmonic of degree k

    1 for k = 0, otherwise sqrt(2) Re (x1 + i x2)^k for ell = 1 and
    sqrt(2) Im (x1 + i x2)^k for ell = 2.
    """
    if k < 0 or ell not in (1, 2) or (k == 0 and ell != 1):
        raise IndexOutOfRangeError(f"circle harmonic index needs k >= 0 and ell in 1..dim, got k={k}, ell={ell}")
    x1, x2 = split_point(x, 2)
    if k == 0:
        return finish(x1 * 0.0 + 1.0)
    c, s = x1, x2
    for _ in range(k - 1):
        c, s = c * x1 - s * x2, s * x1 + c * x2
    return finish(np.sqrt(2.0) * (c if ell == 1 else s))


def ball_classical_eval(gamma: float, n: int, m: int, ell: int, x):
    """P_m^{(gamma, n-2m)}(2|x|^2 - 1) Y_ell^{n-2m}(x) on the unit disk"""
    if gamma <= -1.0:
        raise InvalidParameterError(f"gamma must exceed -1, got {gamma}")
    if n < 0 or not 0 <= 2 * m <= n:
        raise IndexOutOfRangeError(f"ball index needs 0 <= m <= n / 2, got n={n}, m={m}")
    x1, x2 = split_point(x, 2)
    r2 = x1 * x1 + x2 * x2
    return finish(jacobi_homogeneous(m, gamma, n - 2.0 * m, 2.0 * r2 - 1.0, 1.0) * circle_harmonic_eval(n - 2 * m, ell, (x1, x2)))


def _as_index(idx: IndexLike) -> RevBasisIndex:
    if isinstance(idx, RevBasisIndex):
        return idx
    n, k, j, ell = idx
    return RevBasisIndex(n=n, k=k, j=j, ell=ell)


def _check_ball_index(idx: RevBasisIndex) -> None:
    if not (0 <= idx.k <= idx.n and 0 <= 2 * idx.j <= idx.k and 1 <= idx.ell <= dim_harmonics(idx.k - 2 * idx.j)):
        raise IndexOutOfRangeError(f"invalid ball index {idx.as_tuple()}")


def ball3_indices(n: int) -> List[Tuple[int, int, int, int]]:
    return [
        (n, k, j, ell)
        for k in range(n + 1)
        for j in range(k // 2 + 1)
        for ell in range(1, dim_harmonics(k - 2 * j) + 1)
    ]


def rev_indices(n: int) -> List[Tuple[int, int, int, int]]:
    """Indices of the even class (n - k even) at degree n"""
    return [idx for idx in ball3_indices(n) if (n - idx[1]) % 2 == 0]


def _ball3_basis(bw: BallWeightParams, idx: RevBasisIndex, x1, x2, t):
    n, k, j, ell = idx.as_tuple()
    q = 1.0 - t * t
    outer = gen_gegenbauer_scaled(n - k, k + bw.gamma + 1.5, bw.beta, t, 1.0)
    radial = jacobi_homogeneous(j, bw.gamma, float(k - 2 * j), 2.0 * (x1 * x1 + x2 * x2) - q, q)
    return outer * radial * circle_harmonic_eval(k - 2 * j, ell, (x1, x2))


def ball3_weighted_eval(bw: BallWeightParams, idx: IndexLike, y):
    """
    Orthogonal polynomial for |y3|^(2 beta) (1 - |y|^2)^gamma on the unit ball

    C_{n-k}^{(k+gamma+3/2, beta)}(t) (1 - t^2)^(k/2) P_j^{(gamma, k-2j)}(2|x'|^2 - 1) Y_ell^{k-2j}(x')
    with x' = x / sqrt(1 - t^2), evaluated as a polynomial in (x, t).

    Args:
        bw: Weight exponents
        idx: Index (n, k, j, ell)
        y: Point (x1, x2, t)

    Returns:
        Basis value(s)
    """
    check_ball_params(bw)
    idx = _as_index(idx)
    _check_ball_index(idx)
    x1, x2, t = split_point(y, 3)
    return finish(_ball3_basis(bw, idx, x1, x2, t))


def _check_in_ball(x1, x2, t) -> None:
    if np.any(value_of(x1) ** 2 + value_of(x2) ** 2 + value_of(t) ** 2 > 1.0 + BOUNDARY_TOL):
        raise DomainViolationError("point lies outside the unit ball")


@lru_cache(maxsize=128)
def _ball3_rule_cached(bw: BallWeightParams, degree: int, half: bool) -> PlanarRule:
    mt = points_for_exactness(degree, per_node=4)
    rt = gen_gegenbauer_rule(mt, GenGegenbauerParams(lam=bw.gamma + 1.5, mu=bw.beta))
    tn, tw = rt.nodes, rt.weights
    if half:
        keep = tn > 0
        tn, tw = tn[keep], tw[keep]
    mr = points_for_exactness(degree // 2)
    rr = gauss_jacobi_rule(mr, JacobiParams(a=bw.gamma, b=0.0))
    rho = (1.0 + rr.nodes) / 2.0
    rw = rr.weights * 2.0 ** (-bw.gamma - 1.0) / 2.0
    count = degree + 1
    theta = 2.0 * np.pi * np.arange(count) / count
    aw = np.full(count, 2.0 * np.pi / count)

    T, R, A = np.meshgrid(tn, np.sqrt(rho), theta, indexing="ij")
    scale = np.sqrt(1.0 - T**2)
    points = np.stack([scale * R * np.cos(A), scale * R * np.sin(A), T], axis=-1).reshape(-1, 3)
    weights = np.einsum("i,j,k->ijk", tw, rw, aw).ravel()
    label = f"{'half-' if half else ''}ball {bw.beta, bw.gamma}"
    logger.debug("Built %s rule with %d nodes", label, weights.size)
    return PlanarRule(points=points, weights=weights, exactness=degree, label=label)


def ball3_quadrature(bw: BallWeightParams, degree: int, half: bool = False) -> PlanarRule:
    """
    Product rule on the unit ball: generalized Gegenbauer in t, Gauss-Jacobi in
    |z|^2 and the trapezoid rule in the angle, under x = sqrt(1 - t^2) z
    """
    check_ball_params(bw)
    if degree < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {degree}")
    return _ball3_rule_cached(bw, int(degree), half)


def ball3_diffop_apply(bw: BallWeightParams, f: Callable, y, even_in_t: bool = False):
    """
    Apply Delta - <y, grad>^2 - (2 beta + 2 gamma + 3) <y, grad> plus the beta reflection term

    Args:
        bw: Weight exponents
        f: Callable f(x1, x2, t) built from arithmetic and symdom.jets functions
        y: Interior point(s)
        even_in_t: Treat f as even in t, so the reflection term becomes 2 beta f_t / t

    Returns:
        Operator value(s)
    """
    check_ball_params(bw)
    x1, x2, t = split_point(y, 3)
    x1, x2, t = (np.asarray(value_of(c)) for c in (x1, x2, t))
    _check_in_ball(x1, x2, t)
    val, grad, hess = partials(f, x1, x2, t)
    coords = np.stack(np.broadcast_arrays(x1, x2, t), axis=-1)
    laplace = np.trace(hess, axis1=-2, axis2=-1)
    quad = np.einsum("...i,...ij,...j->...", coords, hess, coords)
    radial = np.einsum("...i,...i->...", coords, grad)
    out = laplace - quad - (2.0 * bw.beta + 2.0 * bw.gamma + 4.0) * radial
    if bw.beta != 0.0:
        ft = grad[..., 2]
        if even_in_t:
            if np.any(t == 0.0):
                raise SingularEvaluationError("2 beta f_t / t is undefined at t = 0")
            out = out + 2.0 * bw.beta * ft / t
        else:
            if np.any(np.abs(t) < DIFFERENCE_MIN):
                raise SingularEvaluationError(f"t-difference term needs |t| >= {DIFFERENCE_MIN}")
            mirrored = np.asarray(f(x1, x2, -t), dtype=float)
            out = out + bw.beta * (2.0 * ft / t - (val - mirrored) / (t * t))
    return finish(out)


def ball3_eigenvalue(bw: BallWeightParams, n: int) -> float:
    return -n * (n + 2.0 * bw.beta + 2.0 * bw.gamma + 3.0)


def _ball_kernel_rules(bw: BallWeightParams, m: int):
    return skewed_rule(bw.beta, m), symmetric_rule(bw.gamma, m)


def ball3_kernel_eval(bw: BallWeightParams, n: int, y1, y2, rule_res: Optional[int] = None):
    """
    Reproducing kernel of the degree-n space on the weighted ball

    Z_n^{beta+gamma+3/2}(<x1, x2> + u t1 t2 + v sqrt(1 - |y1|^2) sqrt(1 - |y2|^2))
    integrated against the skewed measure for beta in u and the symmetric
    measure for gamma in v.
    """
    check_ball_params(bw, kernel=True)
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    a1, a2, s1 = split_point(y1, 3)
    b1, b2, s2 = split_point(y2, 3)
    _check_in_ball(a1, a2, s1)
    _check_in_ball(b1, b2, s2)
    if n == 0:
        return finish(np.ones(np.broadcast(a1, b1).shape))
    m = rule_res if rule_res is not None else n // 2 + 2
    ru, rv = _ball_kernel_rules(bw, m)
    U, V = np.meshgrid(ru.nodes, rv.nodes, indexing="ij")
    w = np.outer(ru.weights, rv.weights)
    inner = (a1 * b1 + a2 * b2)[..., None, None]
    tt = (s1 * s2)[..., None, None]
    root = np.sqrt(np.clip(1.0 - a1**2 - a2**2 - s1**2, 0.0, None) * np.clip(1.0 - b1**2 - b2**2 - s2**2, 0.0, None))
    arg = inner + U * tt + V * root[..., None, None]
    values = zn_table(n, bw.beta + bw.gamma + 1.5, arg)[n]
    return finish(np.sum(values * w, axis=(-2, -1)))


def ball3_parity_kernel_eval(bw: BallWeightParams, n: int, y1, y2, rule_res: Optional[int] = None):
    """Kernel of the even class: average over t -> -t of the second point"""
    b1, b2, s2 = split_point(y2, 3)
    full = np.asarray(ball3_kernel_eval(bw, n, y1, (b1, b2, s2), rule_res))
    mirrored = np.asarray(ball3_kernel_eval(bw, n, y1, (b1, b2, -s2), rule_res))
    return finish(0.5 * (full + mirrored))


def _rev_radicand(dp: DomainParams, x1, x2, t):
    return (-dp.a + (dp.a - dp.c) * (x1 * x1 + x2 * x2) + t * t) / (dp.b - dp.a)


def rev_contains(dp: DomainParams, p, half: bool = True, tol: float = BOUNDARY_TOL):
    check_domain(dp)
    x1, x2, t = split_point(p, 3)
    x1, x2, t = value_of(x1), value_of(x2), value_of(t)
    r2 = x1 * x1 + x2 * x2
    t2 = t * t
    inside = (r2 <= 1.0 + tol) & (t2 >= dp.a + (dp.c - dp.a) * r2 - tol) & (t2 <= dp.b + (dp.c - dp.b) * r2 + tol)
    if half:
        inside = inside & (t >= -tol)
    if np.ndim(inside) == 0:
        return bool(inside)
    return inside


def rev_frakt(dp: DomainParams, p):
    """t(|x|, t) on the solid of revolution"""
    check_domain(dp)
    x1, x2, t = split_point(p, 3)
    r = _rev_radicand(dp, x1, x2, t)
    rv = value_of(r)
    if np.any(rv < -RADICAND_TOL):
        raise DomainViolationError("point lies below the lower surface")
    if jets.is_jet(r):
        return jets.sqrt(r)
    return finish(np.sqrt(np.clip(rv, 0.0, None)))


def rev_psi(dp: DomainParams, p) -> Tuple:
    """(x, t) -> (x, t(|x|, t)), onto the upper half ball"""
    x1, x2, t = split_point(p, 3)
    if not np.all(rev_contains(dp, (x1, x2, t))):
        raise DomainViolationError(f"point lies outside the upper half of the solid {dp.a, dp.b, dp.c}")
    return finish(x1), finish(x2), rev_frakt(dp, (x1, x2, t))


def rev_psi_inv(dp: DomainParams, y) -> Tuple:
    check_domain(dp)
    x1, x2, tau = split_point(y, 3)
    if np.any(value_of(tau) < -BOUNDARY_TOL):
        raise DomainViolationError("point lies outside the upper half ball")
    _check_in_ball(x1, x2, tau)
    r = (dp.b - dp.a) * tau * tau + dp.a + (dp.c - dp.a) * (x1 * x1 + x2 * x2)
    if jets.is_jet(r):
        return x1, x2, jets.sqrt(r)
    return finish(x1), finish(x2), finish(np.sqrt(np.clip(r, 0.0, None)))


def rev_weight(dp: DomainParams, bw: BallWeightParams, p):
    """|t| z^(beta - 1/2) y3^gamma with z = t(|x|, t)^2 and y3 = (b - (b - c)|x|^2 - t^2) / (b - a)"""
    check_ball_params(bw)
    x1, x2, t = split_point(p, 3)
    if not np.all(rev_contains(dp, (x1, x2, t), half=False)):
        raise DomainViolationError("point lies outside the solid")
    z = np.clip(_rev_radicand(dp, x1, x2, t), 0.0, None)
    y3 = np.clip((dp.b - (dp.b - dp.c) * (x1 * x1 + x2 * x2) - t * t) / (dp.b - dp.a), 0.0, None)
    for base, expo in ((z, bw.beta - 0.5), (y3, bw.gamma)):
        if expo < 0 and np.any(base == 0.0):
            raise SingularEvaluationError("weight has a negative exponent at a zero factor")
    return finish(np.abs(t) * z ** (bw.beta - 0.5) * y3**bw.gamma)


@lru_cache(maxsize=128)
def rev_quadrature(dp: DomainParams, bw: BallWeightParams, degree: int) -> PlanarRule:
    """Half-ball rule pushed through psi^{-1}, weights scaled by b - a"""
    check_domain(dp)
    ball = ball3_quadrature(bw, degree, half=True)
    x1, x2, tau = ball.coords()
    _, _, t = rev_psi_inv(dp, (x1, x2, tau))
    return PlanarRule(
        points=np.stack([x1, x2, t], axis=-1),
        weights=ball.weights * (dp.b - dp.a),
        exactness=ball.exactness,
        label=f"revolution {dp.a, dp.b, dp.c}",
    )


def _check_even_class(idx: RevBasisIndex) -> None:
    _check_ball_index(idx)
    if (idx.n - idx.k) % 2:
        raise IndexOutOfRangeError(f"index {idx.as_tuple()} is not in the even class (n - k odd)")


def rev_basis_eval(dp: DomainParams, bw: BallWeightParams, idx: IndexLike, p):
    """Even-class basis Q_{n,k,j,ell} o psi on the upper half of the solid; t < 0 is reflected"""
    check_ball_params(bw)
    idx = _as_index(idx)
    _check_even_class(idx)
    x1, x2, t = split_point(p, 3)
    y = rev_psi(dp, (x1, x2, abs(t)))
    return finish(_ball3_basis(bw, idx, *y))


def rev_basis_eval_triangle(dp: DomainParams, bw: BallWeightParams, idx: IndexLike, p):
    """
    Triangle form T_{j, (n-k)/2 + j}^{(k-2j, beta-1/2, gamma)}(|x|^2, z) Y_ell^{k-2j}(x)

    z = t(|x|, t)^2; proportional to rev_basis_eval member by member.
    """
    check_domain(dp)
    idx = _as_index(idx)
    _check_even_class(idx)
    x1, x2, t = split_point(p, 3)
    h = idx.k - 2 * idx.j
    params = TriangleWeightParams(alpha1=float(h), alpha2=bw.beta - 0.5, alpha3=bw.gamma)
    s = x1 * x1 + x2 * x2
    z = _rev_radicand(dp, x1, x2, t)
    tri = triangle_basis_eval(params, idx.j, (idx.n - idx.k) // 2 + idx.j, (s, z))
    return finish(tri * circle_harmonic_eval(h, idx.ell, (x1, x2)))


@lru_cache(maxsize=4096)
def rev_basis_norm(dp: DomainParams, bw: BallWeightParams, idx: Tuple[int, int, int, int]) -> float:
    rule = rev_quadrature(dp, bw, 2 * idx[0])
    return rule.mean(np.asarray(rev_basis_eval(dp, bw, idx, rule.coords())) ** 2)


def rev_orthonormal_eval(dp: DomainParams, bw: BallWeightParams, idx: IndexLike, p):
    key = _as_index(idx).as_tuple()
    return finish(rev_basis_eval(dp, bw, key, p) / np.sqrt(rev_basis_norm(dp, bw, key)))


def rev_eigenvalue(bw: BallWeightParams, n: int) -> float:
    return ball3_eigenvalue(bw, n)


def _check_operator_point(dp: DomainParams, x1, x2, t, t_min: float) -> None:
    if np.any(t < t_min):
        raise SingularEvaluationError(f"operator evaluation needs t >= {t_min}")
    if not np.all(rev_contains(dp, (x1, x2, t))):
        raise DomainViolationError("operator evaluation needs points of the upper half")


def rev_diffop_apply(dp: DomainParams, bw: BallWeightParams, f: Callable, p, t_min: float = T_MIN):
    """
    Apply the spectral operator of the solid by pulling back the ball operator

    Args:
        dp: Domain shape
        bw: Weight exponents
        f: Callable f(x1, x2, t) built from arithmetic and symdom.jets functions
        p: Point(s) with t >= t_min
        t_min: Smallest admissible t

    Returns:
        Operator value(s)
    """
    check_ball_params(bw)
    x1, x2, t = (np.asarray(value_of(c)) for c in split_point(p, 3))
    _check_operator_point(dp, x1, x2, t, t_min)
    y = rev_psi(dp, (x1, x2, t))
    if bw.beta != 0.0 and np.any(np.asarray(y[2]) < 1e-8):
        raise SingularEvaluationError("operator is singular on the lower surface when beta != 0")

    def pulled(a1, a2, tau):
        return f(*rev_psi_inv(dp, (a1, a2, tau)))

    return ball3_diffop_apply(bw, pulled, y, even_in_t=True)


def _derivative_terms(f: Callable, x1, x2, t):
    _, grad, hess = partials(f, x1, x2, t)
    fx = grad[..., :2]
    ft = grad[..., 2]
    hxx = hess[..., :2, :2]
    hxt = hess[..., :2, 2]
    ftt = hess[..., 2, 2]
    x = np.stack(np.broadcast_arrays(x1, x2), axis=-1)
    lap_x = hxx[..., 0, 0] + hxx[..., 1, 1]
    euler = np.einsum("...i,...i->...", x, fx)
    euler2 = np.einsum("...i,...ij,...j->...", x, hxx, x) + euler
    mixed = np.einsum("...i,...i->...", x, hxt)
    return lap_x, euler, euler2, mixed, ft, ftt


def rev_diffop_apply_direct(dp: DomainParams, bw: BallWeightParams, f: Callable, p, t_min: float = T_MIN):
    """Rational-coefficient form of the solid's spectral operator"""
    check_ball_params(bw)
    x1, x2, t = (np.asarray(value_of(c)) for c in split_point(p, 3))
    _check_operator_point(dp, x1, x2, t, t_min)
    a, b, c = dp.a, dp.b, dp.c
    beta, gamma = bw.beta, bw.gamma
    lap_x, euler, euler2, mixed, ft, ftt = _derivative_terms(f, x1, x2, t)
    r2 = x1 * x1 + x2 * x2
    big_n = (a - c) * (b - c) * r2 + (a - t * t) * (t * t - b)
    out = (
        lap_x
        - euler2
        + big_n / (t * t) * ftt
        + 2.0 * (c / t - t) * mixed
        - (2.0 * beta + 2.0 * gamma + 3.0) * (euler + t * ft)
        - t * ft
        + (2.0 * b * beta + 2.0 * a * gamma + a + 2.0 * c) / t * ft
        + (a * b + (a - c) * (c - b) * r2) / t**3 * ft
    )
    return finish(out)


def cone_diffop_apply(bw: BallWeightParams, f: Callable, p, t_min: float = T_MIN):
    """Operator on the cone |x| <= t <= 1 written with its own coefficients"""
    check_ball_params(bw)
    x1, x2, t = (np.asarray(value_of(c)) for c in split_point(p, 3))
    _check_operator_point(DomainParams(a=0.0, b=1.0, c=1.0), x1, x2, t, t_min)
    lap_x, euler, euler2, mixed, ft, ftt = _derivative_terms(f, x1, x2, t)
    out = (
        lap_x
        - euler2
        + (1.0 - t * t) * ftt
        + 2.0 * (1.0 / t - t) * mixed
        - (2.0 * bw.beta + 2.0 * bw.gamma + 3.0) * (euler + t * ft)
        - t * ft
        + (2.0 * bw.beta + 2.0) / t * ft
    )
    return finish(out)


def _rev_kernel_table(dp: DomainParams, gamma: float, kmax: int, p1, p2, rule_res: Optional[int] = None) -> np.ndarray:
    x1, x2, t = split_point(p1, 3)
    w1, w2, s = split_point(p2, 3)
    t, s = np.abs(t), np.abs(s)
    for p in ((x1, x2, t), (w1, w2, s)):
        if not np.all(rev_contains(dp, p)):
            raise DomainViolationError("kernel points must lie in the solid")
    m = rule_res if rule_res is not None else kmax // 2 + 2
    rv = symmetric_rule(gamma, m)
    tx = np.asarray(rev_frakt(dp, (x1, x2, t)))
    ty = np.asarray(rev_frakt(dp, (w1, w2, s)))
    y3x = np.clip((dp.b - (dp.b - dp.c) * (x1 * x1 + x2 * x2) - t * t) / (dp.b - dp.a), 0.0, None)
    y3y = np.clip((dp.b - (dp.b - dp.c) * (w1 * w1 + w2 * w2) - s * s) / (dp.b - dp.a), 0.0, None)
    inner = (x1 * w1 + x2 * w2)[..., None]
    cross = (tx * ty)[..., None]
    root = np.sqrt(y3x * y3y)[..., None]
    lam = gamma + 1.5
    plus = zn_table(kmax, lam, inner + cross + rv.nodes * root)
    minus = zn_table(kmax, lam, inner - cross + rv.nodes * root)
    return 0.5 * np.sum((plus + minus) * rv.weights, axis=-1)


def rev_kernel_eval(dp: DomainParams, gamma: float, n: int, p1, p2, rule_res: Optional[int] = None):
    """
    Kernel of the degree-n even class for beta = 0, as a single integral

    Average over the sign of t(|y|, s) of
    Z_n^{gamma+3/2}(<x, y> + t(|x|, t) t(|y|, s) + v sqrt(y3(x, t) y3(y, s))).
    """
    check_domain(dp)
    check_ball_params(BallWeightParams(beta=0.0, gamma=gamma), kernel=True)
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    return finish(_rev_kernel_table(dp, gamma, n, p1, p2, rule_res)[n])


def rev_kernel_pullback(dp: DomainParams, gamma: float, n: int, p1, p2):
    """Even-class ball kernel evaluated at the psi images of the reflected points"""
    bw = BallWeightParams(beta=0.0, gamma=gamma)
    x1, x2, t = split_point(p1, 3)
    w1, w2, s = split_point(p2, 3)
    y1 = rev_psi(dp, (x1, x2, np.abs(t)))
    y2 = rev_psi(dp, (w1, w2, np.abs(s)))
    return ball3_parity_kernel_eval(bw, n, y1, y2)


def rev_kernel_sum(dp: DomainParams, bw: BallWeightParams, n: int, p1, p2):
    total = 0.0
    for idx in rev_indices(n):
        total = total + rev_orthonormal_eval(dp, bw, idx, p1) * rev_orthonormal_eval(dp, bw, idx, p2)
    return finish(total)


def rev_distance(dp: DomainParams, p1, p2):
    """arccos(<X, Y> + sqrt(1 - |X|^2) sqrt(1 - |Y|^2)) with X, Y the psi images"""
    X = np.stack(np.broadcast_arrays(*rev_psi(dp, p1)), axis=-1)
    Y = np.stack(np.broadcast_arrays(*rev_psi(dp, p2)), axis=-1)
    nx = np.clip(1.0 - np.sum(X * X, axis=-1), 0.0, None)
    ny = np.clip(1.0 - np.sum(Y * Y, axis=-1), 0.0, None)
    arg = np.sum(X * Y, axis=-1) + np.sqrt(nx * ny)
    return finish(np.arccos(clamp_unit(arg)))


def _bump(t: np.ndarray) -> np.ndarray:
    pos = t > 0
    return np.where(pos, np.exp(-1.0 / np.where(pos, t, 1.0)), 0.0)


def default_cutoff(t):
    """1 on [0, 1], 0 from 2 on, and the smooth transition h(2-t) / (h(2-t) + h(t-1)) between"""
    t = np.asarray(t, dtype=float)
    left, right = _bump(2.0 - t), _bump(t - 1.0)
    mid = left / np.where(left + right > 0, left + right, 1.0)
    return finish(np.where(t <= 1.0, 1.0, np.where(t >= 2.0, 0.0, mid)))


def check_cutoff(cutoff: Callable, points: int = 401, tol: float = 1e-12) -> None:
    """Check the plateau on [0, 1], support in [0, 2] and range [0, 1] on a grid"""
    grid = np.linspace(0.0, 3.0, points)
    values = np.asarray([float(cutoff(g)) for g in grid])
    if np.any(np.abs(values[grid <= 1.0] - 1.0) > tol):
        raise InvalidCutoffError("cutoff must equal 1 on [0, 1]")
    if np.any(np.abs(values[grid >= 2.0]) > tol):
        raise InvalidCutoffError("cutoff must vanish from 2 on")
    if np.any(values < -tol) or np.any(values > 1.0 + tol):
        raise InvalidCutoffError("cutoff values must lie in [0, 1]")


def localized_kernel_eval(dp: DomainParams, gamma: float, n: int, p1, p2, cutoff: Optional[Callable] = None):
    """
    sum_{k <= 2n} a(k / n) K_k(p1, p2) with a smooth cutoff a

    Args:
        dp: Domain shape
        gamma: Weight exponent (beta = 0)
        n: Localization degree
        p1, p2: Points of the upper half
        cutoff: Cutoff a; validated when given, default_cutoff otherwise

    Returns:
        Kernel value(s)
    """
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    if cutoff is None:
        cutoff = default_cutoff
    else:
        check_cutoff(cutoff)
    check_domain(dp)
    check_ball_params(BallWeightParams(beta=0.0, gamma=gamma), kernel=True)
    if n == 0:
        return rev_kernel_eval(dp, gamma, 0, p1, p2)
    table = _rev_kernel_table(dp, gamma, 2 * n, p1, p2)
    window = np.array([float(cutoff(k / n)) for k in range(2 * n + 1)])
    return finish(np.tensordot(window, table, axes=(0, 0)))


def angular_ops_apply(dp: DomainParams, which: AngularOp, f: Callable, p, i: int = 1, j: int = 2, t_min: float = T_MIN):
    """
    First-order operators on the family a = 0, b = 1

    D_ij = x_i d_j - x_j d_i, frakD_i = d_i + c x_i / t d_t,
    frakD_3 = (tt / t) d_t, frakD_i3 = -(tt / t)(t d_i - (1 - c) x_i d_t) and
    multiplication by phi_c = sqrt(1 - (1 - c) t^2 - |x|^2), where
    tt = sqrt(t^2 - c |x|^2). Indices i, j are 1 or 2.
    """
    if dp.a != 0.0 or dp.b != 1.0:
        raise InvalidParameterError(f"angular operators need a = 0 and b = 1, got {dp}")
    which = AngularOp(which)
    if i not in (1, 2) or j not in (1, 2):
        raise IndexOutOfRangeError(f"angular operator indices must be 1 or 2, got i={i}, j={j}")
    x1, x2, t = (np.asarray(value_of(c)) for c in split_point(p, 3))
    _check_operator_point(dp, x1, x2, t, t_min)
    c = dp.c
    x = (x1, x2)
    val, grad, _ = partials(f, x1, x2, t)
    ft = grad[..., 2]
    tt = np.sqrt(np.clip(t * t - c * (x1 * x1 + x2 * x2), 0.0, None))
    if which is AngularOp.D_IJ:
        out = x[i - 1] * grad[..., j - 1] - x[j - 1] * grad[..., i - 1]
    elif which is AngularOp.FRAK_D_I:
        out = grad[..., i - 1] + c * x[i - 1] / t * ft
    elif which is AngularOp.FRAK_D_3:
        out = tt / t * ft
    elif which is AngularOp.FRAK_D_I3:
        out = -(tt / t) * (t * grad[..., i - 1] - (1.0 - c) * x[i - 1] * ft)
    else:
        phi = np.sqrt(np.clip(1.0 - (1.0 - c) * t * t - x1 * x1 - x2 * x2, 0.0, None))
        out = phi * val
    return finish(out)


def rev_sample(dp: DomainParams, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples on the upper half of the solid by rejection"""
    check_domain(dp)
    tmax = float(np.sqrt(max(dp.b, dp.c)))
    out: List[np.ndarray] = []
    have = 0
    while have < count:
        batch = max(64, 4 * (count - have))
        cand = np.stack(
            [rng.uniform(-1.0, 1.0, batch), rng.uniform(-1.0, 1.0, batch), rng.uniform(0.0, tmax, batch)],
            axis=-1,
        )
        keep = cand[rev_contains(dp, cand, tol=0.0)]
        out.append(keep)
        have += len(keep)
    return np.concatenate(out)[:count]


class RevolutionSpace(EvenSpace):
    """Even-class orthonormal polynomials for W^{beta,gamma} on a solid of revolution"""

    name = "revolution"
    dim = 3

    def __init__(self, domain: DomainParams, beta: float, gamma: float):
        check_domain(domain)
        if domain.dim != 2:
            raise InvalidParameterError(f"only base dimension 2 is supported, got {domain.dim}")
        self.domain = domain
        self.beta = beta
        self.gamma = gamma
        self.bw = BallWeightParams(beta=beta, gamma=gamma)
        check_ball_params(self.bw)

    def indices(self, n: int) -> List[Tuple[int, ...]]:
        return list(rev_indices(n))

    def evaluate(self, index: Tuple[int, ...], pts) -> np.ndarray:
        return rev_orthonormal_eval(self.domain, self.bw, tuple(index), pts)

    def rule(self, degree: int) -> PlanarRule:
        return rev_quadrature(self.domain, self.bw, degree)

    def eigenvalue(self, n: int) -> float:
        return rev_eigenvalue(self.bw, n)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rev_sample(self.domain, count, rng)
