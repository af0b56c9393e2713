"""Exception types shared across the package."""


class SymqmError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SymqmError, ValueError):
    """Operands live in spaces of different dimensions."""


class NonSquareError(SymqmError, ValueError):
    """A matrix that must be square is not."""


class NonHermitianError(SymqmError, ValueError):
    """A matrix failed the Hermiticity check.

    Attributes
    ----------
    deviation : float
        Max-norm of ``M - M†`` measured at construction.
    """

    def __init__(self, deviation, message=None):
        self.deviation = float(deviation)
        super().__init__(message or f"matrix is not Hermitian (deviation {deviation:.3e})")


class EigensolverError(SymqmError, RuntimeError):
    """The eigensolver did not converge."""


class NonConvergenceError(SymqmError, RuntimeError):
    """An implicit integrator step failed to converge.

    Attributes
    ----------
    step : int
        Index of the failing step.
    iterations : int
        Iterations spent before giving up.
    """

    def __init__(self, step, iterations):
        self.step = int(step)
        self.iterations = int(iterations)
        super().__init__(f"fixed-point solve failed at step {step} after {iterations} iterations")


class MethodUnsupportedError(SymqmError, ValueError):
    """The requested integration method does not apply to this observable."""


class NormalizationError(SymqmError, ValueError):
    """A state or map output that must be unit norm is not."""


class PreconditionFailedError(SymqmError, ValueError):
    """A hypothesis required by a construction does not hold.

    Attributes
    ----------
    hypothesis : str
        Which hypothesis failed, e.g. ``"normalization"``.
    residual : float
        Measured residual of the failing hypothesis.
    """

    def __init__(self, hypothesis, residual):
        self.hypothesis = str(hypothesis)
        self.residual = float(residual)
        super().__init__(f"precondition failed: {hypothesis} (residual {residual:.3e})")


class OperatorSyntaxError(SymqmError, ValueError):
    """An operator expression could not be parsed.

    Attributes
    ----------
    position : int
        0-based character offset of the error in the input text.
    """

    def __init__(self, message, position):
        self.position = int(position)
        super().__init__(f"{message} (at position {position})")


class ScenarioError(SymqmError, ValueError):
    """A scenario file is malformed or fails cross-validation.

    Attributes
    ----------
    field : str or None
        Name of the offending field, when one can be identified.
    """

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")
