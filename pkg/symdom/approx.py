"""
Fourier orthogonal expansions on curved domains and solids of revolution
"""

import logging
import time
import warnings
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from symdom import jets
from symdom.base import EvenSpace
from symdom.curved2d import CurvedSpace
from symdom.errors import IndexOutOfRangeError, InvalidParameterError, QuadratureUnderresolvedWarning
from symdom.revolution import RevolutionSpace, localized_kernel_eval, rev_distance, rev_psi_inv, rev_sample
from symdom.types import ConvergenceReport, DomainParams, Expansion, ExpansionTerm, LocalizationProfile, PlanarRule
from symdom.utils import fit_decay_order, make_rng, parallel_map

logger = logging.getLogger(__name__)

QUAD_MARGIN = 8


def make_space(name: str, domain: DomainParams, beta: float, gamma: float) -> EvenSpace:
    """Build the even space called 'curved2d' or 'revolution'"""
    if name == CurvedSpace.name:
        return CurvedSpace(domain, beta, gamma)
    if name == RevolutionSpace.name:
        return RevolutionSpace(domain, beta, gamma)
    raise InvalidParameterError(f"unknown space {name!r}; use 'curved2d' or 'revolution'")


def resolve_quad_degree(n: int, quad_degree: Optional[int] = None) -> int:
    """Default quadrature degree 2n + 8; warns when below 2n"""
    if n < 0:
        raise IndexOutOfRangeError(f"degree must be nonnegative, got {n}")
    if quad_degree is None:
        return 2 * n + QUAD_MARGIN
    if quad_degree < 2 * n:
        msg = f"quadrature degree {quad_degree} is below 2n = {2 * n}; coefficients are approximate"
        logger.warning(msg)
        warnings.warn(msg, QuadratureUnderresolvedWarning, stacklevel=3)
    return int(quad_degree)


def _basis_table(space: EvenSpace, indices: Sequence[Tuple[int, ...]], nodes) -> np.ndarray:
    columns = parallel_map(lambda idx: np.asarray(space.evaluate(idx, nodes), dtype=float), list(indices))
    return np.stack(columns, axis=-1)


def _sampled(space: EvenSpace, rule: PlanarRule, f: Callable) -> Tuple[Tuple[np.ndarray, ...], np.ndarray]:
    nodes = rule.coords()
    values = np.broadcast_to(np.asarray(f(*nodes), dtype=float), nodes[0].shape)
    return nodes, values


def project(space: EvenSpace, f: Callable, n: int, quad_degree: Optional[int] = None) -> Expansion:
    """
    Coefficients of f against the orthonormal basis up to degree n

    Args:
        space: Even space to expand in
        f: Function of the space's coordinates, evaluated on quadrature nodes
        n: Highest degree
        quad_degree: Exactness of the quadrature rule, 2n + 8 by default

    Returns:
        Expansion with one term per basis index
    """
    qd = resolve_quad_degree(n, quad_degree)
    rule = space.rule(qd)
    nodes, values = _sampled(space, rule, f)
    indices = space.all_indices(n)
    table = _basis_table(space, indices, nodes)
    w = rule.weights / rule.mass
    coefs = (w * values) @ table
    logger.debug("Projected onto %d basis functions of %s with %d nodes", len(indices), space.name, w.size)
    return Expansion(
        space=space.name,
        domain=space.domain,
        beta=space.beta,
        gamma=space.gamma,
        max_degree=n,
        quad_degree=qd,
        terms=[ExpansionTerm(index=tuple(idx), value=float(c)) for idx, c in zip(indices, coefs)],
    )


def expansion_space(expansion: Expansion) -> EvenSpace:
    return make_space(expansion.space, expansion.domain, expansion.beta, expansion.gamma)


def partial_sum_eval(expansion: Expansion, N: int, pts, space: Optional[EvenSpace] = None):
    """Sum of the projections of degree at most N at the given points"""
    if not 0 <= N <= expansion.max_degree:
        raise IndexOutOfRangeError(f"partial sum degree must lie in 0..{expansion.max_degree}, got {N}")
    space = space or expansion_space(expansion)
    total = 0.0
    for term in expansion.terms:
        if term.degree <= N and term.value != 0.0:
            total = total + term.value * np.asarray(space.evaluate(term.index, pts), dtype=float)
    if np.ndim(total) == 0:
        return float(total)
    return total


def l2_errors(space: EvenSpace, f: Callable, degrees: Sequence[int], quad_degree: Optional[int] = None) -> List[float]:
    """Weighted L2 errors of the partial sums S_N f for each N in degrees"""
    degrees = list(degrees)
    if not degrees:
        return []
    top = max(degrees)
    qd = resolve_quad_degree(top, quad_degree)
    rule = space.rule(qd)
    nodes, values = _sampled(space, rule, f)
    w = rule.weights / rule.mass
    residual = values.copy()
    by_degree: Dict[int, float] = {}
    for n in range(top + 1):
        table = _basis_table(space, space.indices(n), nodes)
        residual = residual - table @ ((w * residual) @ table)
        by_degree[n] = float(np.sqrt(np.dot(w, residual**2)))
    return [by_degree[n] for n in degrees]


def best_error_l2(space: EvenSpace, f: Callable, N: int, quad_degree: Optional[int] = None) -> float:
    """L2 distance from f to the even polynomials of degree N, attained by S_N f"""
    return l2_errors(space, f, [N], quad_degree)[0]


def sampled_sup_errors(
    space: EvenSpace, f: Callable, degrees: Sequence[int], samples: int = 2000, seed: int = 0, quad_degree: Optional[int] = None
) -> List[float]:
    """Maximum of |f - S_N f| over seeded random points; a lower estimate of the sup norm"""
    degrees = list(degrees)
    if not degrees:
        return []
    expansion = project(space, f, max(degrees), quad_degree)
    pts = space.sample(samples, make_rng(seed))
    coords = tuple(pts[:, i] for i in range(pts.shape[1]))
    exact = np.asarray(f(*coords), dtype=float)
    out = []
    for N in degrees:
        approx = partial_sum_eval(expansion, N, coords, space)
        out.append(float(np.max(np.abs(exact - approx))))
    return out


def kfunctional_proxy(
    space: EvenSpace, f: Callable, r: int, rho: float, max_degree: int, quad_degree: Optional[int] = None
) -> float:
    """
    Upper bound for the K-functional over the candidates g = S_m f, m <= max_degree

    The seminorm of (-D)^{r/2} g is taken spectrally:
    sum over degrees k of (k (k + lambda))^r times the squared coefficients.
    """
    if r not in (1, 2):
        raise InvalidParameterError(f"r must be 1 or 2, got {r}")
    if rho < 0:
        raise InvalidParameterError(f"rho must be nonnegative, got {rho}")
    expansion = project(space, f, max_degree, quad_degree)
    energy = expansion.degree_energy()
    errors = l2_errors(space, f, range(max_degree + 1), expansion.quad_degree)
    best = float("inf")
    seminorm2 = 0.0
    for m in range(max_degree + 1):
        seminorm2 += (-space.eigenvalue(m)) ** r * energy[m]
        best = min(best, errors[m] + rho**r * float(np.sqrt(seminorm2)))
    return best


def convergence_study(
    space: EvenSpace,
    f: Callable,
    degrees: Sequence[int],
    quad_degree: Optional[int] = None,
    samples: int = 2000,
    seed: int = 0,
    label: str = "",
) -> ConvergenceReport:
    """L2 and sampled sup errors of partial sums with a fitted algebraic decay order"""
    degrees = sorted(set(int(d) for d in degrees))
    start = time.perf_counter()
    l2 = l2_errors(space, f, degrees, quad_degree)
    sup = sampled_sup_errors(space, f, degrees, samples, seed, quad_degree)
    runtime = time.perf_counter() - start
    logger.info("Convergence study %s over %d degrees took %.2fs", label or space.name, len(degrees), runtime)
    return ConvergenceReport(
        label=label or space.name,
        degrees=degrees,
        l2_errors=l2,
        sup_errors=sup,
        decay_order=fit_decay_order(degrees, l2),
        runtime_seconds=runtime,
    )


def default_center(domain: DomainParams) -> Tuple[float, float, float]:
    x1, x2, t = rev_psi_inv(domain, (0.0, 0.0, 0.5))
    return (float(x1), float(x2), float(t))


def localization_profile(
    domain: DomainParams,
    gamma: float,
    n: int,
    center: Optional[Tuple[float, float, float]] = None,
    bin_width: float = 0.1,
    samples: int = 3000,
    seed: int = 0,
    cutoff: Optional[Callable] = None,
) -> LocalizationProfile:
    """
    Normalized localized kernel magnitudes binned by distance from a center

    Each bin holds the largest |L_n(center, y)| / L_n(center, center) over
    seeded samples y; the center itself is included.
    """
    if bin_width <= 0:
        raise InvalidParameterError(f"bin width must be positive, got {bin_width}")
    center = center or default_center(domain)
    pts = np.concatenate([np.asarray([center], dtype=float), rev_sample(domain, samples, make_rng(seed))])
    coords = tuple(pts[:, i] for i in range(3))
    c = tuple(np.full(len(pts), v) for v in center)
    values = np.asarray(localized_kernel_eval(domain, gamma, n, c, coords, cutoff), dtype=float)
    peak = float(localized_kernel_eval(domain, gamma, n, center, center, cutoff))
    dist = np.asarray(rev_distance(domain, c, coords), dtype=float)
    nbins = max(1, int(np.ceil(float(np.max(dist)) / bin_width + 1e-12)))
    edges = [bin_width * i for i in range(nbins + 1)]
    which = np.minimum((dist / bin_width).astype(int), nbins - 1)
    profile: List[float] = []
    counts: List[int] = []
    for b in range(nbins):
        sel = np.abs(values[which == b])
        counts.append(int(sel.size))
        profile.append(float(np.max(sel)) / peak if sel.size else float("nan"))
    envelope: List[float] = []
    running = 0.0
    for value in reversed(profile):
        if not np.isnan(value):
            running = max(running, value)
        envelope.append(running)
    envelope.reverse()
    return LocalizationProfile(
        degree=n, center=center, bin_edges=edges, profile=profile, envelope=envelope, counts=counts
    )


def _expcos2(u, v):
    return jets.exp(u) * jets.cos(v * v)


def _expcos3(x1, x2, t):
    return jets.exp(x1) * jets.cos(t * t)


def _one2(u, v):
    return u * 0.0 + v * 0.0 + 1.0


def _one3(x1, x2, t):
    return x1 * 0.0 + t * 0.0 + 1.0


def _quadratic2(u, v):
    return u * u + v * v


def _quadratic3(x1, x2, t):
    return x1 * x1 + x2 * x2 + t * t


BUILTINS: Dict[Tuple[str, int], Callable] = {
    ("expcos", 2): _expcos2,
    ("expcos", 3): _expcos3,
    ("one", 2): _one2,
    ("one", 3): _one3,
    ("quadratic", 2): _quadratic2,
    ("quadratic", 3): _quadratic3,
}


def builtin_function(name: str, dim: int) -> Callable:
    """Look up a built-in test function; accepts 'builtin:NAME' or 'NAME'"""
    key = name.split(":", 1)[1] if name.startswith("builtin:") else name
    try:
        return BUILTINS[(key, dim)]
    except KeyError:
        names = sorted({k for k, _ in BUILTINS})
        raise InvalidParameterError(f"unknown builtin {name!r} for dimension {dim}; available: {', '.join(names)}")
