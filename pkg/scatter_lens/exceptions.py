"""
Error hierarchy for scatter-lens.

Every exception carries an ``exit_code`` that the command-line driver returns
unchanged, so the codes below are part of the public interface:

    0  success
    1  unexpected exception
    2  command-line usage error (argparse)
    3  ParseError
    4  ValidationError and its subclasses
    5  SolverError and its subclasses (unless listed separately)
    6  InsufficientDecay
    7  IllConditioned
    8  SingularMinus
    9  InadmissibleData
    10 ToleranceExceeded
"""


class ScatterLensError(Exception):
    """Base class for all scatter-lens errors."""

    exit_code = 5


class ParseError(ScatterLensError):
    """An input file could not be parsed."""

    exit_code = 3


class ValidationError(ScatterLensError):
    """Input parsed but violates a precondition."""

    exit_code = 4


class NonSquare(ValidationError):
    pass


class NonUnitary(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class NotDiagonal(ValidationError):
    pass


class InadmissibleData(ValidationError):
    """Scattering data failed the admissibility screen and --force was not given."""

    exit_code = 9


class SolverError(ScatterLensError):
    """A numerical stage failed."""

    exit_code = 5


class EigendecompositionFailure(SolverError):
    pass


class IntegrationFailure(SolverError):
    pass


class UnsupportedK(SolverError):
    pass


class RangeTooCoarse(SolverError):
    """Two bound states fell inside one scan cell; refine the κ-grid."""


class NotARoot(SolverError):
    pass


class IndefiniteB(SolverError):
    pass


class GridTooCoarse(SolverError):
    pass


class SingularDenominator(SolverError):
    pass


class InsufficientDecay(SolverError):
    """S(k) − Û has not decayed enough at k_max for a safe Fourier transform."""

    exit_code = 6


class IllConditioned(SolverError):
    exit_code = 7


class SingularMinus(SolverError):
    """M₋(k) is numerically singular on the real axis."""

    exit_code = 8


class ToleranceExceeded(ScatterLensError):
    """A round-trip or self-test comparison missed its configured tolerance."""

    exit_code = 10
