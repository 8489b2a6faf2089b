"""
Exception and warning types raised by symdom
"""


class SymdomError(Exception):
    """Base class for all symdom errors"""


class InvalidParameterError(SymdomError, ValueError):
    """A weight, domain or index parameter is outside its admissible range"""


class DomainViolationError(SymdomError, ValueError):
    """A point lies outside the domain an operation is defined on"""


class SingularEvaluationError(SymdomError, ArithmeticError):
    """Evaluation hits a singular coefficient (boundary or reflection axis)"""


class IndexOutOfRangeError(SymdomError, IndexError):
    """A basis index does not address a member of the requested family"""


class ConvergenceError(SymdomError, RuntimeError):
    """An iterative solver failed to converge"""


class DegenerateSampleError(SymdomError, ValueError):
    """A sample set carries no information (e.g. all values vanish)"""


class InvalidCutoffError(InvalidParameterError):
    """A localization cutoff violates its plateau or support contract"""


class ConfigurationError(SymdomError, ValueError):
    """Environment or command-line configuration is malformed"""


class ToleranceBreach(SymdomError):
    """A verification driver measured a deviation above its tolerance"""

    def __init__(self, message: str, worst: float, tolerance: float):
        super().__init__(message)
        self.worst = worst
        self.tolerance = tolerance


class QuadratureUnderresolvedWarning(UserWarning):
    """A quadrature rule is not exact for the requested polynomial degree"""
