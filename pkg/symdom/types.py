"""
Parameter records, quadrature rules and report types
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class JacobiParams(BaseModel):
    """Exponents of the Jacobi weight (1 - t)^a (1 + t)^b on [-1, 1]"""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., description="Exponent of (1 - t), must exceed -1")
    b: float = Field(..., description="Exponent of (1 + t), must exceed -1")


class GenGegenbauerParams(BaseModel):
    """Parameters of the weight |t|^(2 mu) (1 - t^2)^(lam - 1/2)"""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(..., description="Gegenbauer parameter, must exceed -1/2")
    mu: float = Field(..., description="Exponent of |t|^2, must exceed -1/2")


class QuadKind(str, Enum):
    """Whether a rule discretizes a continuous measure or a point-mass limit"""

    CONTINUOUS = "continuous"
    POINT_MASS_LIMIT = "point-mass-limit"


class LimitKind(str, Enum):
    """Point-mass limits of normalized one-dimensional measures"""

    HALF_ENDPOINT_AVERAGE = "half-endpoint-average"
    RIGHT_ENDPOINT = "right-endpoint"


class QuadRule(BaseModel):
    """One-dimensional quadrature rule on [-1, 1]"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: np.ndarray = Field(..., description="Strictly increasing nodes in [-1, 1]")
    weights: np.ndarray = Field(..., description="Positive weights")
    exactness: int = Field(..., description="Highest polynomial degree integrated exactly")
    kind: QuadKind = Field(QuadKind.CONTINUOUS, description="Continuous rule or point-mass limit")

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of values sampled at the nodes"""
        return float(np.dot(self.weights, values))


class PlanarRule(BaseModel):
    """Quadrature rule on a domain in the plane or in space"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray = Field(..., description="Nodes, shape (count, dim)")
    weights: np.ndarray = Field(..., description="Weights, shape (count,)")
    exactness: int = Field(..., description="Polynomial degree integrated exactly")
    label: str = Field("", description="Domain and weight the rule belongs to")

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def coords(self) -> Tuple[np.ndarray, ...]:
        """Node coordinates as separate arrays"""
        return tuple(self.points[:, i] for i in range(self.points.shape[1]))

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))

    def mean(self, values: np.ndarray) -> float:
        """Integral normalized by the total mass"""
        return float(np.dot(self.weights, values) / np.sum(self.weights))


class TriangleWeightParams(BaseModel):
    """Exponents of u^alpha1 v^alpha2 (1 - u - v)^alpha3 on the reference triangle"""

    model_config = ConfigDict(frozen=True)

    alpha1: float = Field(..., description="Exponent of u")
    alpha2: float = Field(..., description="Exponent of v")
    alpha3: float = Field(..., description="Exponent of 1 - u - v")

    @property
    def total(self) -> float:
        return self.alpha1 + self.alpha2 + self.alpha3

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.alpha1, self.alpha2, self.alpha3)


class DiskWeightParams(BaseModel):
    """Exponents of |u|^(2k1) |v|^(2k2) (1 - u^2 - v^2)^k3 on the unit disk"""

    model_config = ConfigDict(frozen=True)

    kappa1: float = Field(..., description="Reflection exponent in u")
    kappa2: float = Field(..., description="Reflection exponent in v")
    kappa3: float = Field(..., description="Exponent of 1 - u^2 - v^2")

    @property
    def total(self) -> float:
        return self.kappa1 + self.kappa2 + self.kappa3

    def swapped(self) -> "DiskWeightParams":
        """The same weight with the roles of u and v exchanged"""
        return DiskWeightParams(kappa1=self.kappa2, kappa2=self.kappa1, kappa3=self.kappa3)


class DomainParams(BaseModel):
    """Shape parameters (a, b, c) of a fully symmetric curved domain"""

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"a": 0.0, "b": 1.0, "c": 1.0, "dim": 2}},
    )

    a: float = Field(..., description="Lower curve v^2 = a + (c - a) u^2, a >= 0")
    b: float = Field(..., description="Upper curve v^2 = b + (c - b) u^2, b > a")
    c: float = Field(..., description="Common value of v^2 at |u| = 1, c >= 0")
    dim: int = Field(2, description="Base dimension d of a domain of revolution; only 2 is supported")


class CurvedWeightParams(BaseModel):
    """Weight exponents on a curved domain; spectral features need kappa1 = 0"""

    model_config = ConfigDict(frozen=True)

    kappa1: float = Field(0.0, description="Reflection exponent in u")
    kappa2: float = Field(..., description="Exponent tied to the lower curve")
    kappa3: float = Field(..., description="Exponent tied to the upper curve")

    @classmethod
    def spectral(cls, beta: float, gamma: float) -> "CurvedWeightParams":
        return cls(kappa1=0.0, kappa2=beta, kappa3=gamma)

    def disk(self) -> DiskWeightParams:
        """Disk weight transported by the quadratic bijection"""
        return DiskWeightParams(kappa1=self.kappa1, kappa2=self.kappa2, kappa3=self.kappa3)


class BallWeightParams(BaseModel):
    """Exponents of |y3|^(2 beta) (1 - |y|^2)^gamma on the unit ball"""

    model_config = ConfigDict(frozen=True)

    beta: float = Field(..., description="Reflection exponent in the last coordinate, >= 0")
    gamma: float = Field(..., description="Exponent of 1 - |y|^2, > -1")


class RevBasisIndex(BaseModel):
    """Index (n; k, j, l) of a ball or revolution basis polynomial"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., description="Total degree")
    k: int = Field(..., description="Degree carried by the base variables, 0..n")
    j: int = Field(..., description="Radial Jacobi degree, 0..k//2")
    ell: int = Field(1, description="Circle harmonic index, 1 or 2")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.n, self.k, self.j, self.ell)


class ParityFamily(str, Enum):
    """Parity of an orthogonal polynomial in (u, v): E even, O odd"""

    EE = "EE"
    OO = "OO"
    EO = "EO"
    OE = "OE"


class ExpansionTerm(BaseModel):
    """One coefficient of an orthonormal expansion"""

    index: Tuple[int, ...] = Field(..., description="Basis index, degree first")
    value: float = Field(..., description="Coefficient against the orthonormal basis")

    @property
    def degree(self) -> int:
        return self.index[0]


class Expansion(BaseModel):
    """Coefficient table with the provenance needed to evaluate it"""

    space: str = Field(..., description="'curved2d' or 'revolution'")
    domain: DomainParams
    beta: float
    gamma: float
    max_degree: int
    quad_degree: int
    orthonormal: bool = True
    terms: List[ExpansionTerm] = Field(default_factory=list)

    def coefficients(self) -> Dict[Tuple[int, ...], float]:
        return {term.index: term.value for term in self.terms}

    def degree_energy(self) -> List[float]:
        """Sum of squared coefficients per degree"""
        energy = [0.0] * (self.max_degree + 1)
        for term in self.terms:
            energy[term.degree] += term.value**2
        return energy


class ConvergenceReport(BaseModel):
    """Partial-sum errors per degree with a fitted algebraic decay order"""

    label: str = ""
    degrees: List[int]
    l2_errors: List[float]
    sup_errors: List[float] = Field(..., description="Maximum over a random sample, approximate")
    decay_order: float
    runtime_seconds: float = 0.0


class LocalizationProfile(BaseModel):
    """Normalized kernel magnitudes binned by distance from a center"""

    degree: int
    center: Tuple[float, float, float]
    bin_edges: List[float]
    profile: List[float] = Field(..., description="Max |L_n| per bin over L_n(center, center); nan when empty")
    envelope: List[float] = Field(..., description="Running max of the profile from the far end")
    counts: List[int]


class RelationReport(BaseModel):
    """Fit of one sampled function as a constant multiple of another"""

    constant: float
    max_deviation: float
    samples: int
    meta: Optional[Dict[str, float]] = None
