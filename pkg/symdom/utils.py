"""
Numerical helpers shared across modules
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, Tuple, TypeVar

import numpy as np
from scipy.special import gammaln, poch

from symdom.config import get_settings
from symdom.jets import Jet, value_of

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

BOUNDARY_TOL = 1e-12


def pochhammer(z: float, m: int) -> float:
    """Rising factorial (z)_m"""
    return float(poch(z, m))


def log_beta(x: float, y: float) -> float:
    return float(gammaln(x) + gammaln(y) - gammaln(x + y))


def finish(x):
    """Return Python-level scalars for 0-d results, arrays and Jets unchanged"""
    if isinstance(x, Jet):
        return x
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return float(x)
    return x


def split_point(pt, dim: int) -> Tuple:
    """Split a point (tuple of coordinates or array with trailing axis dim)"""
    if isinstance(pt, (tuple, list)):
        if len(pt) != dim:
            raise ValueError(f"expected {dim} coordinates, got {len(pt)}")
        return tuple(c if isinstance(c, Jet) else np.asarray(c, dtype=float) for c in pt)
    arr = np.asarray(pt, dtype=float)
    if arr.shape[-1] != dim:
        raise ValueError(f"expected trailing axis of length {dim}, got shape {arr.shape}")
    return tuple(arr[..., i] for i in range(dim))


def ones_like(x):
    """Constant one with the shape (and Jet structure) of x"""
    return x * 0.0 + 1.0


def any_below(x, bound: float) -> bool:
    return bool(np.any(value_of(x) < bound))


def parallel_map(func: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """Map preserving order, with at most SYMDOM_THREADS workers"""
    threads = get_settings().threads
    if threads <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def fit_decay_order(degrees: Iterable[int], errors: Iterable[float]) -> float:
    """Negated slope of log(error) against log(degree), ignoring zeros"""
    pairs = [(n, e) for n, e in zip(degrees, errors) if n > 0 and e > 0]
    if len(pairs) < 2:
        return float("nan")
    x = np.log([n for n, _ in pairs])
    y = np.log([e for _, e in pairs])
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)


def clamp_unit(x: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Clip to [-1, 1], tolerating overshoot up to tol"""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + tol):
        logger.warning("Clamping values outside [-1, 1] by more than %g", tol)
    return np.clip(x, -1.0, 1.0)
