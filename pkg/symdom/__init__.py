"""
symdom - orthogonal polynomials, reproducing kernels and spectral operators
on planar domains bounded by quadratic curves and on 3-D solids of revolution
"""

__version__ = "0.1.0"

from symdom.approx import (
    best_error_l2,
    builtin_function,
    convergence_study,
    kfunctional_proxy,
    l2_errors,
    localization_profile,
    make_space,
    partial_sum_eval,
    project,
    sampled_sup_errors,
)
from symdom.base import EvenSpace
from symdom.config import Settings, clear_settings, get_settings, load_settings, set_settings
from symdom.curved2d import CurvedSpace
from symdom.errors import (
    ConfigurationError,
    ConvergenceError,
    DegenerateSampleError,
    DomainViolationError,
    IndexOutOfRangeError,
    InvalidCutoffError,
    InvalidParameterError,
    QuadratureUnderresolvedWarning,
    SingularEvaluationError,
    SymdomError,
    ToleranceBreach,
)
from symdom.revolution import RevolutionSpace
from symdom.types import (
    BallWeightParams,
    CurvedWeightParams,
    DiskWeightParams,
    DomainParams,
    Expansion,
    TriangleWeightParams,
)

__all__ = [
    "__version__",
    # Spaces
    "EvenSpace",
    "CurvedSpace",
    "RevolutionSpace",
    "make_space",
    # Expansions
    "project",
    "partial_sum_eval",
    "l2_errors",
    "best_error_l2",
    "sampled_sup_errors",
    "kfunctional_proxy",
    "convergence_study",
    "localization_profile",
    "builtin_function",
    # Types
    "DomainParams",
    "TriangleWeightParams",
    "DiskWeightParams",
    "CurvedWeightParams",
    "BallWeightParams",
    "Expansion",
    # Config
    "Settings",
    "load_settings",
    "get_settings",
    "set_settings",
    "clear_settings",
    # Errors
    "SymdomError",
    "InvalidParameterError",
    "DomainViolationError",
    "SingularEvaluationError",
    "IndexOutOfRangeError",
    "ConvergenceError",
    "DegenerateSampleError",
    "InvalidCutoffError",
    "ConfigurationError",
    "ToleranceBreach",
    "QuadratureUnderresolvedWarning",
]
