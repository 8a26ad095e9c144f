"""Exception types shared across the package."""


class JuliaZetaError(Exception):
    """Base class for all package-specific failures."""


class DomainError(JuliaZetaError):
    """Parameter outside the hyperbolic regime c < -2, or invalid input range."""


class BranchCutError(JuliaZetaError):
    """Inverse-branch argument landed on the square-root cut (-inf, 0]."""


class ConvergenceError(JuliaZetaError):
    """An iteration failed to reach its tolerance within its cap."""


class CapacityError(JuliaZetaError):
    """A computation would exceed the configured maximum word order."""


class BracketError(JuliaZetaError):
    """No sign change found in the requested real bracket."""


class RelationError(JuliaZetaError):
    """Word pair is related (w ~ v) where an unrelated pair is required."""


class ContourError(JuliaZetaError):
    """Argument-principle integral failed its integrality check."""
