"""Exception types shared across the package."""


class ConstraintError(ValueError):
    """A parameter combination violates a validity constraint.

    Raised for bad grid/signal parameters, out-of-range band indices,
    quadrature steps too coarse to resolve the integrand, and similar
    precondition failures. Maps to CLI exit code 2.
    """


class SingularSystemError(RuntimeError):
    """A Vandermonde system is singular or numerically degenerate.

    Raised when interpolation nodes collide (coincident unit-circle
    nodes) or a solve encounters a singular matrix. Maps to CLI exit
    code 3.
    """
