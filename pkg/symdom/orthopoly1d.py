"""
One-dimensional orthogonal polynomials and Gauss-type quadrature

Jacobi, Gegenbauer and generalized Gegenbauer polynomials are evaluated with
three-term recurrences that use nothing but arithmetic, so every evaluator
accepts floats, numpy arrays and symdom.jets.Jet values alike.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from symdom.errors import ConvergenceError, IndexOutOfRangeError, InvalidParameterError
from symdom.jets import Jet
from symdom.types import GenGegenbauerParams, JacobiParams, LimitKind, QuadKind, QuadRule
from symdom.utils import finish, pochhammer

logger = logging.getLogger(__name__)

# Point-mass limits integrate every polynomial exactly
LIMIT_EXACTNESS = 2**31 - 1


def _as_input(t):
    if isinstance(t, Jet):
        return t
    return np.asarray(t, dtype=float)


def _check_jacobi(a: float, b: float) -> None:
    if not (a > -1.0 and b > -1.0):
        raise InvalidParameterError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")


def _check_degree(n: int) -> None:
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")


def jacobi_homogeneous(n: int, a: float, b: float, p, q):
    """
    Evaluate q^n P_n^{(a,b)}(p / q) as a polynomial in (p, q)

    Stays finite when q vanishes, which is how the bivariate bases handle
    factors such as (1 - v)^j P_j(2u / (1 - v) - 1) on the boundary.
    """
    _check_jacobi(a, b)
    _check_degree(n)
    one = (p + q) * 0.0 + 1.0
    if n == 0:
        return one
    ab = a + b
    q2 = q * q
    prev = one
    cur = (a + 1.0) * q + (ab + 2.0) * (p - q) / 2.0
    for k in range(2, n + 1):
        s = 2.0 * k + ab
        c1 = 2.0 * k * (k + ab) * (s - 2.0)
        c2 = (s - 1.0) * s * (s - 2.0)
        c3 = (s - 1.0) * (a * a - b * b)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        prev, cur = cur, ((c2 * p + c3 * q) * cur - c4 * q2 * prev) / c1
    return cur


def jacobi(n: int, a: float, b: float, t):
    """P_n^{(a,b)}(t) in the standard normalization P_n(1) = (a+1)_n / n!"""
    return jacobi_homogeneous(n, a, b, t, 1.0)


def jacobi_eval(n: int, p: JacobiParams, t):
    """
    Evaluate a Jacobi polynomial

    Args:
        n: Degree
        p: Jacobi exponents
        t: Point(s); any real value, the polynomial extends outside [-1, 1]

    Returns:
        P_n^{(a,b)}(t)
    """
    return finish(jacobi(n, p.a, p.b, _as_input(t)))


def jacobi_deriv(n: int, p: JacobiParams, t, order: int = 1):
    """Derivative of order 1 or 2 via the parameter-shift identity"""
    _check_jacobi(p.a, p.b)
    _check_degree(n)
    if order not in (1, 2):
        raise InvalidParameterError(f"derivative order must be 1 or 2, got {order}")
    t = _as_input(t)
    if n < order:
        return finish(t * 0.0)
    s = n + p.a + p.b
    if order == 1:
        return finish((s + 1.0) / 2.0 * jacobi(n - 1, p.a + 1.0, p.b + 1.0, t))
    return finish((s + 1.0) * (s + 2.0) / 4.0 * jacobi(n - 2, p.a + 2.0, p.b + 2.0, t))


def gegenbauer(n: int, lam: float, t):
    """Classical Gegenbauer polynomial C_n^lam(t)"""
    _check_degree(n)
    one = t * 0.0 + 1.0
    if n == 0:
        return one
    prev, cur = one, 2.0 * lam * t
    for k in range(2, n + 1):
        prev, cur = cur, (2.0 * (k + lam - 1.0) * t * cur - (k + 2.0 * lam - 2.0) * prev) / k
    return cur


def gegenbauer_eval(n: int, lam: float, t):
    if lam <= -0.5 or lam == 0.0:
        raise InvalidParameterError(f"Gegenbauer parameter must exceed -1/2 and be nonzero, got {lam}")
    return finish(gegenbauer(n, lam, _as_input(t)))


def zn_eval(n: int, lam: float, t):
    """Kernel factor Z_n^lam(t) = (n + lam) / lam * C_n^lam(t)"""
    if lam <= 0.0:
        raise InvalidParameterError(f"Z_n requires lambda > 0, got {lam}")
    t = _as_input(t)
    return finish((n + lam) / lam * gegenbauer(n, lam, t))


def zn_table(nmax: int, lam: float, t: np.ndarray) -> np.ndarray:
    """Z_0^lam .. Z_nmax^lam stacked along a new leading axis"""
    if lam <= 0.0:
        raise InvalidParameterError(f"Z_n requires lambda > 0, got {lam}")
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    prev = np.ones_like(t)
    out[0] = prev
    if nmax >= 1:
        cur = 2.0 * lam * t
        out[1] = (1.0 + lam) / lam * cur
        for k in range(2, nmax + 1):
            prev, cur = cur, (2.0 * (k + lam - 1.0) * t * cur - (k + 2.0 * lam - 2.0) * prev) / k
            out[k] = (k + lam) / lam * cur
    return out


def _check_gen_gegenbauer(lam: float, mu: float) -> None:
    if not (lam > -0.5 and mu > -0.5):
        raise InvalidParameterError(
            f"generalized Gegenbauer parameters must exceed -1/2, got lambda={lam}, mu={mu}"
        )


def gen_gegenbauer_const(lam: float, mu: float, k: int) -> float:
    """(lam + mu)_k / (mu + 1/2)_k, with the vanishing factor lam + mu dropped when lam + mu = 0"""
    if k == 0:
        return 1.0
    if lam + mu == 0.0:
        return pochhammer(1.0, k - 1) / pochhammer(mu + 0.5, k)
    return pochhammer(lam + mu, k) / pochhammer(mu + 0.5, k)


def gen_gegenbauer_scaled(n: int, lam: float, mu: float, x, r2):
    """
    Evaluate r^n C_n^{(lam,mu)}(x / r) with r^2 = r2, as a polynomial in (x, r2)

    With r2 = 1 this is the generalized Gegenbauer polynomial itself. At
    lam + mu = 0 the usual normalization vanishes for n >= 1 and the limit
    normalization (lam + mu)^{-1} C_n^{(lam,mu)} is used instead.
    """
    _check_gen_gegenbauer(lam, mu)
    _check_degree(n)
    m = n // 2
    p = 2.0 * x * x - r2
    if n % 2 == 0:
        const = gen_gegenbauer_const(lam, mu, m)
        return const * jacobi_homogeneous(m, lam - 0.5, mu - 0.5, p, r2)
    const = gen_gegenbauer_const(lam, mu, m + 1)
    return const * x * jacobi_homogeneous(m, lam - 0.5, mu + 0.5, p, r2)


def gen_gegenbauer_eval(n: int, p: GenGegenbauerParams, t):
    """Generalized Gegenbauer polynomial C_n^{(lam,mu)}(t)"""
    t = _as_input(t)
    return finish(gen_gegenbauer_scaled(n, p.lam, p.mu, t, 1.0))


def jacobi_mass(a: float, b: float) -> float:
    """Total mass of (1 - t)^a (1 + t)^b on [-1, 1]"""
    return float(np.exp((a + b + 1.0) * np.log(2.0) + gammaln(a + 1.0) + gammaln(b + 1.0) - gammaln(a + b + 2.0)))


@lru_cache(maxsize=512)
def _gauss_jacobi_arrays(m: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    ab = a + b
    mass = jacobi_mass(a, b)
    diag = np.empty(m)
    diag[0] = (b - a) / (ab + 2.0)
    if m == 1:
        nodes, weights = diag.copy(), np.array([mass])
    else:
        k = np.arange(1, m, dtype=float)
        s = 2.0 * k + ab
        diag[1:] = (b * b - a * a) / (s * (s + 2.0))
        beta = np.empty(m - 1)
        beta[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) ** 2 * (3.0 + ab))
        if m > 2:
            kk = k[1:]
            ss = 2.0 * kk + ab
            beta[1:] = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (ss**2 * (ss + 1.0) * (ss - 1.0))
        try:
            nodes, vecs = eigh_tridiagonal(diag, np.sqrt(beta))
        except np.linalg.LinAlgError as e:
            raise ConvergenceError(f"tridiagonal eigensolver failed for m={m}, a={a}, b={b}: {e}")
        weights = mass * vecs[0] ** 2
    logger.debug("Built %d-point Gauss-Jacobi rule for a=%g, b=%g", m, a, b)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_rule(m: int, p: JacobiParams) -> QuadRule:
    """
    Gauss rule for (1 - t)^a (1 + t)^b by Golub-Welsch

    Args:
        m: Number of nodes
        p: Jacobi exponents

    Returns:
        QuadRule exact through degree 2m - 1
    """
    _check_jacobi(p.a, p.b)
    if m < 1:
        raise InvalidParameterError(f"rule needs at least one node, got m={m}")
    nodes, weights = _gauss_jacobi_arrays(int(m), float(p.a), float(p.b))
    return QuadRule(nodes=nodes, weights=weights, exactness=2 * m - 1)


def limit_rule(kind: LimitKind) -> QuadRule:
    """Point-mass limits of the normalized symmetric and skewed measures"""
    kind = LimitKind(kind)
    if kind is LimitKind.HALF_ENDPOINT_AVERAGE:
        nodes, weights = np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    else:
        nodes, weights = np.array([1.0]), np.array([1.0])
    return QuadRule(nodes=nodes, weights=weights, exactness=LIMIT_EXACTNESS, kind=QuadKind.POINT_MASS_LIMIT)


def _normalized(rule: QuadRule) -> QuadRule:
    return QuadRule(nodes=rule.nodes, weights=rule.weights / rule.mass, exactness=rule.exactness, kind=rule.kind)


def symmetric_rule(alpha: float, m: int) -> QuadRule:
    """Normalized rule for (1 - t^2)^(alpha - 1/2); the half-endpoint limit at alpha = -1/2"""
    if alpha < -0.5:
        raise InvalidParameterError(f"symmetric measure needs alpha >= -1/2, got {alpha}")
    if alpha == -0.5:
        return limit_rule(LimitKind.HALF_ENDPOINT_AVERAGE)
    return _normalized(gauss_jacobi_rule(m, JacobiParams(a=alpha - 0.5, b=alpha - 0.5)))


def skewed_rule(kappa: float, m: int) -> QuadRule:
    """Normalized rule for (1 + t)(1 - t^2)^(kappa - 1); the right-endpoint limit at kappa = 0"""
    if kappa < 0.0:
        raise InvalidParameterError(f"skewed measure needs kappa >= 0, got {kappa}")
    if kappa == 0.0:
        return limit_rule(LimitKind.RIGHT_ENDPOINT)
    return _normalized(gauss_jacobi_rule(m, JacobiParams(a=kappa - 1.0, b=kappa)))


def gen_gegenbauer_rule(m: int, p: GenGegenbauerParams) -> QuadRule:
    """
    Rule with 2m nodes for |t|^(2 mu) (1 - t^2)^(lam - 1/2), exact through degree 4m - 1

    Even and odd parts are folded onto a Gauss-Jacobi rule in s = 2t^2 - 1.
    """
    _check_gen_gegenbauer(p.lam, p.mu)
    base = gauss_jacobi_rule(m, JacobiParams(a=p.lam - 0.5, b=p.mu - 0.5))
    half = np.sqrt((1.0 + base.nodes) / 2.0)
    w = base.weights * 2.0 ** (-(p.lam + p.mu + 1.0))
    nodes = np.concatenate([-half[::-1], half])
    weights = np.concatenate([w[::-1], w])
    return QuadRule(nodes=nodes, weights=weights, exactness=4 * m - 1)


def gen_gegenbauer_mass(lam: float, mu: float) -> float:
    """Total mass of |t|^(2 mu) (1 - t^2)^(lam - 1/2) on [-1, 1]"""
    return float(np.exp(gammaln(mu + 0.5) + gammaln(lam + 0.5) - gammaln(lam + mu + 1.0)))


def points_for_exactness(degree: int, per_node: int = 2) -> int:
    """Smallest node count m with per_node * m - 1 >= degree"""
    return max(1, -(-(max(degree, 0) + 1) // per_node))
