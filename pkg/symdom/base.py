"""
Base interface for spaces of polynomials even in the last variable
"""

from abc import ABC, abstractmethod
from typing import List, Tuple

import numpy as np

from symdom.types import DomainParams, PlanarRule


class EvenSpace(ABC):
    """Orthonormal polynomials on the upper half of a symmetric domain"""

    name: str
    dim: int
    domain: DomainParams
    beta: float
    gamma: float

    @abstractmethod
    def indices(self, n: int) -> List[Tuple[int, ...]]:
        """
        Basis indices of degree n

        Args:
            n: Total degree

        Returns:
            Index tuples with the degree first
        """
        pass

    @abstractmethod
    def evaluate(self, index: Tuple[int, ...], pts) -> np.ndarray:
        """
        Evaluate an orthonormal basis member

        Args:
            index: Index tuple from indices()
            pts: Points with trailing axis dim, or a tuple of coordinate arrays

        Returns:
            Values normalized so the weighted mean of the square is one
        """
        pass

    @abstractmethod
    def rule(self, degree: int) -> PlanarRule:
        """Quadrature rule on the upper half, exact for even polynomials of the given degree"""
        pass

    @abstractmethod
    def eigenvalue(self, n: int) -> float:
        """Eigenvalue of the spectral operator on degree-n members"""
        pass

    @abstractmethod
    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform random points on the upper half, shape (count, dim)"""
        pass

    def all_indices(self, nmax: int) -> List[Tuple[int, ...]]:
        out: List[Tuple[int, ...]] = []
        for n in range(nmax + 1):
            out.extend(self.indices(n))
        return out
