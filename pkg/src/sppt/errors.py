"""Exception hierarchy.

Two families matter to callers: :class:`InvalidInput` (the input does not
meet a precondition) and :class:`NumericalError` (the input was accepted
but a numerical step failed). The command line maps them to different
exit codes.
"""


class SpptError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(SpptError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(SpptError, ArithmeticError):
    """A numerical procedure failed on accepted input."""


class NotSquare(InvalidInput):
    pass


class NotHermitian(InvalidInput):
    pass


class NotPSD(InvalidInput):
    pass


class NotUnitary(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    pass


class InvalidProbability(InvalidInput):
    pass


class NotDensityMatrix(InvalidInput):
    pass


class MalformedFactor(InvalidInput):
    pass


class NotSuperSPPT(InvalidInput):
    """The factor fails the commutation condition required for decomposition."""


class NotCommutingFamily(InvalidInput):
    pass


class ConvergenceFailure(NumericalError):
    pass


class RangeViolation(NumericalError):
    """An off-diagonal block is not of the form ``X_i S X_i``.

    Positivity keeps the row space of ``R_ij`` inside ``range(X_i)`` but not
    its column space, so a state with a singular pivot block can lack a
    factor with couplings ``S_ij X_i`` altogether. Tiny defects on a
    nearly singular pivot raise this too.
    """


class DiagonalizationFailure(NumericalError):
    pass


class InternalError(SpptError, AssertionError):
    """A consistency invariant of the library itself was broken."""
