"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function (e.g. |x| > 1 for the semicircle)."""


class SingularInputError(ValueError):
    """Input sits on a singularity, such as x == y for the log kernel."""


class QuadratureError(RuntimeError):
    """Gauss-Legendre doubling did not reach the requested agreement."""


class ConvergenceError(RuntimeError):
    """An iterative eigenvalue solver ran out of iterations."""


class ResourceLimitError(ValueError):
    """Requested size exceeds the practical cap of a code path."""
