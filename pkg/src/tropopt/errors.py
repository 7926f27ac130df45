"""Exception hierarchy shared by all tropopt modules."""


class TropicalError(Exception):
    """Base class for every error raised by tropopt."""


class SemifieldMismatch(TropicalError, TypeError):
    """Operands belong to different semifields."""


class DimensionError(TropicalError, ValueError):
    """Operands do not conform in shape."""


class BottomInversionError(TropicalError, ZeroDivisionError):
    """The zero element has no inverse (or negative power)."""


class ParseError(TropicalError, ValueError):
    """Malformed JSON document or value."""


class SolverError(TropicalError):
    """A solver precondition failed or the problem has no regular solution.

    ``diagnostics`` carries extra values (as Scalars or plain data) that the
    CLI echoes back to the user.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class NotColumnRegular(SolverError):
    pass


class NonRegularVector(SolverError):
    pass


class NonRegularQ(NonRegularVector):
    pass


class ZeroSpectralRadius(SolverError):
    pass


class NoSolutionCertificate(SolverError):
    """``Tr`` of the system matrix exceeds the identity; ``trace`` holds it."""

    def __init__(self, message, trace=None, **diagnostics):
        super().__init__(message, trace=trace, **diagnostics)
        self.trace = trace


class NoRegularSolution(NoSolutionCertificate):
    pass


class InfeasibleConstraints(NoRegularSolution):
    pass


class IncompatibleBounds(SolverError):
    """The upper constraint ``Cx <= h`` cuts off every point with ``x >= B*g``."""


class ProblemTooLarge(SolverError, ValueError):
    pass


class EmptySolutionSet(TropicalError, RuntimeError):
    """Internal consistency failure: a box that theory says is nonempty is empty."""


class EmptyGridError(TropicalError, ValueError):
    pass
