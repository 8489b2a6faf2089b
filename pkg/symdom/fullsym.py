"""
Parity structure of orthogonal polynomials on fully symmetric domains

A weight W(u, v) = w(u^2, v^2) on a domain Omega symmetric under u -> -u and
v -> -v splits its orthogonal polynomials into four parity families, each
built from orthogonal polynomials on sqrt(Omega) = {(u^2, v^2)} for the
weights w_{+-1/2,+-1/2}(s, t) = s^{+-1/2} t^{+-1/2} w(s, t).
"""

import logging
import threading
import warnings
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from symdom.errors import IndexOutOfRangeError, InvalidParameterError, QuadratureUnderresolvedWarning
from symdom.orthopoly1d import jacobi
from symdom.triangle import triangle_orthonormal_eval, triangle_quadrature
from symdom.types import DiskWeightParams, DomainParams, ParityFamily, PlanarRule, TriangleWeightParams
from symdom.utils import finish, split_point

logger = logging.getLogger(__name__)

# Exponent signs (sigma1, sigma2) of s^{sigma/2} t^{sigma/2} per family
FAMILY_SIGNS: Dict[ParityFamily, Tuple[int, int]] = {
    ParityFamily.EE: (-1, -1),
    ParityFamily.OO: (1, 1),
    ParityFamily.EO: (-1, 1),
    ParityFamily.OE: (1, -1),
}

Sign = Tuple[int, int]


def _check_sign(sigma: Sign) -> None:
    if len(sigma) != 2 or any(x not in (-1, 1) for x in sigma):
        raise InvalidParameterError(f"sign pair must have entries -1 or 1, got {sigma}")


def _sign_factor(sigma: Sign, s, t):
    """s^{(sigma1+1)/2} t^{(sigma2+1)/2}: the polynomial turning w_{-,-} into w_sigma"""
    out = s * 0.0 + 1.0
    if sigma[0] == 1:
        out = out * s
    if sigma[1] == 1:
        out = out * t
    return out


class SqrtDomainBasis(ABC):
    """Orthonormal polynomials on sqrt(Omega) for the four weights w_sigma"""

    @abstractmethod
    def rule(self, degree: int) -> PlanarRule:
        """
        Quadrature rule on sqrt(Omega) for w_{-1/2,-1/2}

        Args:
            degree: Polynomial degree in (s, t) to integrate exactly

        Returns:
            PlanarRule with points (s, t)
        """
        pass

    @abstractmethod
    def evaluate(self, sigma: Sign, j: int, m: int, s, t):
        """
        Evaluate the orthonormal polynomial P_{j,m}(w_sigma; s, t)

        Args:
            sigma: Exponent signs, (-1, -1) for w_{-1/2,-1/2}
            j: Index 0..m
            m: Degree
            s, t: Coordinates on sqrt(Omega)

        Returns:
            Value(s) normalized so the w_sigma-mean of the square is one
        """
        pass

    def mass(self, sigma: Sign) -> float:
        """Total mass of w_sigma on sqrt(Omega)"""
        _check_sign(sigma)
        rule = self.rule(2)
        s, t = rule.coords()
        return rule.integrate(_sign_factor(sigma, s, t))

    def ratio(self, sigma: Sign) -> float:
        """sqrt(b(w_sigma) / b_W) with b(w) the inverse mass of w"""
        return float(np.sqrt(self.mass((-1, -1)) / self.mass(sigma)))


class NumericSqrtBasis(SqrtDomainBasis):
    """
    Orthonormal polynomials obtained by QR of a graded tensor Legendre basis

    Raw functions L_{m-j}(x) L_j(y) are ordered by total degree, so the
    triangular factor keeps degree blocks intact and column (j, m) spans the
    degree-m orthogonal space together with its block.
    """

    def __init__(self, rule_factory: Callable[[int], PlanarRule], max_degree: int):
        if max_degree < 0:
            raise InvalidParameterError(f"max_degree must be nonnegative, got {max_degree}")
        self._rule_factory = rule_factory
        self.max_degree = int(max_degree)
        fit_rule = rule_factory(2 * self.max_degree + 2)
        pts = fit_rule.points
        self._lo = pts.min(axis=0)
        self._hi = pts.max(axis=0)
        span = self._hi - self._lo
        span[span == 0.0] = 1.0
        self._span = span
        self._fit_rule = fit_rule
        self._coefs: Dict[Sign, np.ndarray] = {}
        self._lock = threading.Lock()

    def rule(self, degree: int) -> PlanarRule:
        return self._rule_factory(degree)

    def _raw(self, s, t, count: int) -> List:
        x = 2.0 * (s - self._lo[0]) / self._span[0] - 1.0
        y = 2.0 * (t - self._lo[1]) / self._span[1] - 1.0
        out = []
        for deg in range(self.max_degree + 1):
            for j in range(deg + 1):
                if len(out) == count:
                    return out
                out.append(jacobi(deg - j, 0.0, 0.0, x) * jacobi(j, 0.0, 0.0, y))
        return out

    def _coefficients(self, sigma: Sign) -> np.ndarray:
        with self._lock:
            if sigma not in self._coefs:
                self._coefs[sigma] = self._orthonormalize(sigma)
            return self._coefs[sigma]

    def _orthonormalize(self, sigma: Sign) -> np.ndarray:
        rule = self._fit_rule
        s, t = rule.coords()
        size = (self.max_degree + 1) * (self.max_degree + 2) // 2
        w = rule.weights * _sign_factor(sigma, s, t)
        w = w / np.sum(w)
        phi = np.stack(self._raw(s, t, size), axis=-1)
        _, r = np.linalg.qr(np.sqrt(w)[:, None] * phi)
        signs = np.sign(np.diag(r))
        signs[signs == 0.0] = 1.0
        r = r * signs[:, None]
        logger.debug("Orthonormalized %d functions for sign pair %s", size, sigma)
        return np.linalg.inv(r)

    def evaluate(self, sigma: Sign, j: int, m: int, s, t):
        _check_sign(sigma)
        if not 0 <= j <= m <= self.max_degree:
            raise IndexOutOfRangeError(f"numeric basis needs 0 <= j <= m <= {self.max_degree}, got j={j}, m={m}")
        coefs = self._coefficients(sigma)
        col = m * (m + 1) // 2 + j
        raw = self._raw(s, t, col + 1)
        out = s * 0.0
        for i, phi in enumerate(raw):
            if coefs[i, col] != 0.0:
                out = out + coefs[i, col] * phi
        return out


class TriangleSqrtBasis(SqrtDomainBasis):
    """
    Classical Jacobi polynomials on the triangle with vertices (0,a), (0,b), (1,c)

    In the affine coordinate z = (t - a - (c - a) s) / (b - a) the weight
    w_{-1/2,-1/2} of W = |v| |u|^{2k1} z^{k2-1/2} y3^{k3} is the triangle
    weight with exponents (k1 - 1/2, k2 - 1/2, k3). The families with
    sigma2 = +1 pick up the factor t, which is classical only when t is a
    multiple of z; the others fall back to NumericSqrtBasis.
    """

    def __init__(self, domain: DomainParams, kappa: DiskWeightParams, max_degree: int = 12):
        if not (0.0 <= domain.a < domain.b and domain.c >= 0.0):
            raise InvalidParameterError(f"domain needs 0 <= a < b and c >= 0, got {domain}")
        self.domain = domain
        self.kappa = kappa
        self.max_degree = max_degree
        self._base = TriangleWeightParams(alpha1=kappa.kappa1 - 0.5, alpha2=kappa.kappa2 - 0.5, alpha3=kappa.kappa3)
        self._numeric: Optional[NumericSqrtBasis] = None
        self._numeric_lock = threading.Lock()

    @property
    def t_is_z_multiple(self) -> bool:
        return self.domain.a == 0.0 and self.domain.c == 0.0

    def z_of(self, s, t):
        a, b, c = self.domain.a, self.domain.b, self.domain.c
        return (t - a - (c - a) * s) / (b - a)

    def rule(self, degree: int) -> PlanarRule:
        a, b, c = self.domain.a, self.domain.b, self.domain.c
        tri = triangle_quadrature(self._base, degree)
        s, z = tri.coords()
        t = (b - a) * z + a + (c - a) * s
        return PlanarRule(
            points=np.stack([s, t], axis=-1),
            weights=tri.weights * (b - a),
            exactness=tri.exactness,
            label=f"sqrt-domain {a, b, c}",
        )

    def _classical(self, sigma: Sign) -> Optional[TriangleWeightParams]:
        if sigma[1] == 1 and not self.t_is_z_multiple:
            return None
        return TriangleWeightParams(
            alpha1=self._base.alpha1 + (1.0 if sigma[0] == 1 else 0.0),
            alpha2=self._base.alpha2 + (1.0 if sigma[1] == 1 else 0.0),
            alpha3=self._base.alpha3,
        )

    def evaluate(self, sigma: Sign, j: int, m: int, s, t):
        _check_sign(sigma)
        params = self._classical(sigma)
        if params is not None:
            return triangle_orthonormal_eval(params, j, m, (s, self.z_of(s, t)))
        with self._numeric_lock:
            if self._numeric is None:
                self._numeric = NumericSqrtBasis(self.rule, self.max_degree)
        return self._numeric.evaluate(sigma, j, m, s, t)


def disk_sqrt_basis(kappa: DiskWeightParams, max_degree: int = 12) -> TriangleSqrtBasis:
    """sqrt of the unit disk is the reference triangle"""
    return TriangleSqrtBasis(DomainParams(a=0.0, b=1.0, c=0.0), kappa, max_degree)


def curved_sqrt_basis(domain: DomainParams, kappa: DiskWeightParams, max_degree: int = 12) -> TriangleSqrtBasis:
    return TriangleSqrtBasis(domain, kappa, max_degree)


def family_degree(family: ParityFamily, m: int) -> int:
    """Total degree of the family members indexed by m"""
    family = ParityFamily(family)
    return 2 * m if family in (ParityFamily.EE, ParityFamily.OO) else 2 * m + 1


def family_indices(family: ParityFamily, m: int) -> List[Tuple[int, int]]:
    family = ParityFamily(family)
    top = m - 1 if family is ParityFamily.OO else m
    return [(j, m) for j in range(top + 1)]


def parity_basis_eval(base: SqrtDomainBasis, family: ParityFamily, j: int, m: int, pt):
    """
    Orthonormal member of a parity family on Omega

    EE, OO live in degree 2m and EO, OE in degree 2m + 1:
    EE = P_{j,m}(w_{-,-}; u^2, v^2), OO = r u v P_{j,m-1}(w_{+,+}; u^2, v^2),
    EO = r v P_{j,m}(w_{-,+}; u^2, v^2), OE = r u P_{j,m}(w_{+,-}; u^2, v^2),
    with r the matching mass ratio.
    """
    family = ParityFamily(family)
    top = m - 1 if family is ParityFamily.OO else m
    if m < 0 or not 0 <= j <= top:
        raise IndexOutOfRangeError(f"{family.value} index needs 0 <= j <= {top}, got j={j}, m={m}")
    sigma = FAMILY_SIGNS[family]
    u, v = split_point(pt, 2)
    s, t = u * u, v * v
    if family is ParityFamily.EE:
        return finish(base.evaluate(sigma, j, m, s, t))
    deg = m - 1 if family is ParityFamily.OO else m
    prefactor = {ParityFamily.OO: u * v, ParityFamily.EO: v, ParityFamily.OE: u}[family]
    return finish(base.ratio(sigma) * prefactor * base.evaluate(sigma, j, deg, s, t))


def even_family_members(n: int) -> Tuple[ParityFamily, List[Tuple[int, int]]]:
    """The parity family spanning the degree-n polynomials even in v"""
    if n % 2 == 0:
        return ParityFamily.EE, family_indices(ParityFamily.EE, n // 2)
    return ParityFamily.OE, family_indices(ParityFamily.OE, n // 2)


def parity_kernel_eval(full_kernel: Callable, n: int, pt1, pt2):
    """Average of the degree-n kernel over the reflection v -> -v of the second point"""
    v1, v2 = split_point(pt2, 2)
    full = np.asarray(full_kernel(n, pt1, (v1, v2)), dtype=float)
    mirrored = np.asarray(full_kernel(n, pt1, (v1, -v2)), dtype=float)
    return finish(0.5 * (full + mirrored))


def even_extend(f: Callable) -> Callable:
    """Extend a function on the upper half to Omega by g(u, v) = f(u, |v|)"""

    def extended(u, v):
        return f(u, abs(v))

    return extended


def reflect_rule(rule: PlanarRule) -> PlanarRule:
    """Rule on Omega from a rule on its upper half, by mirroring the nodes"""
    if rule.points.shape[1] < 2:
        raise InvalidParameterError("reflection needs at least two coordinates")
    mirrored = rule.points.copy()
    mirrored[:, -1] = -mirrored[:, -1]
    return PlanarRule(
        points=np.concatenate([rule.points, mirrored]),
        weights=np.concatenate([rule.weights, rule.weights]),
        exactness=rule.exactness,
        label=f"reflected {rule.label}",
    )


def proj_even(kernel_eval: Callable, f: Callable, n: int, rule: PlanarRule, pt):
    """
    Degree-n projection of f on the upper half, through the even kernel

    Args:
        kernel_eval: Callable (n, pt1, pt2) returning the even kernel; pt2 gets the node array
        f: Function of (u, v) on the upper half
        n: Degree
        rule: Quadrature rule on the upper half for the weight
        pt: Evaluation point (u, v)

    Returns:
        b * integral of f(y) K_n(pt, y) W(y) over the upper half, b the inverse mass
    """
    if rule.exactness < 2 * n:
        msg = f"rule exactness {rule.exactness} is below 2n = {2 * n}"
        logger.warning(msg)
        warnings.warn(msg, QuadratureUnderresolvedWarning, stacklevel=2)
    nodes = rule.coords()
    values = np.asarray(f(*nodes), dtype=float)
    p1, p2 = split_point(pt, 2)
    kern = np.asarray(kernel_eval(n, (np.asarray(p1)[..., None], np.asarray(p2)[..., None]), nodes), dtype=float)
    return finish(np.sum(kern * (values * rule.weights), axis=-1) / rule.mass)


def even_expansion_errors(base: SqrtDomainBasis, f: Callable, nmax: int, rule: PlanarRule) -> List[float]:
    """Weighted L2 errors of the even-in-v partial sums of f for n = 0..nmax"""
    if rule.exactness < 2 * nmax:
        warnings.warn(f"rule exactness {rule.exactness} is below {2 * nmax}", QuadratureUnderresolvedWarning, stacklevel=2)
    nodes = rule.coords()
    w = rule.weights / rule.mass
    residual = np.asarray(f(*nodes), dtype=float).copy()
    errors = []
    for n in range(nmax + 1):
        family, indices = even_family_members(n)
        for j, m in indices:
            phi = np.asarray(parity_basis_eval(base, family, j, m, nodes), dtype=float)
            residual = residual - np.dot(w, residual * phi) * phi
        errors.append(float(np.sqrt(np.dot(w, residual**2))))
    return errors
