"""Exception hierarchy shared by every module.

Each class carries the CLI exit code of its failure class so the front end
can map exceptions to exit statuses without a lookup table of its own.
"""


class SqrtAtlasError(Exception):
    """Base class; ``exit_code`` is the CLI status for this failure class."""

    exit_code = 9


class ParseError(SqrtAtlasError):
    exit_code = 2


class SingularInput(SqrtAtlasError):
    exit_code = 3


class DefectiveInput(SqrtAtlasError):
    exit_code = 4


class ExistenceViolated(SqrtAtlasError):
    """A negative eigenvalue has odd multiplicity, so no real root exists."""

    exit_code = 5


class IndexOutOfRange(SqrtAtlasError):
    exit_code = 6


class CertificationFailure(SqrtAtlasError):
    exit_code = 7


class NotSpd(SqrtAtlasError):
    exit_code = 8


class NotSpecialOrthogonal(SqrtAtlasError):
    exit_code = 8


class NotSkew(SqrtAtlasError):
    exit_code = 8


class CountUndefined(SqrtAtlasError):
    """Requested a finite root count for a set with positive-dimensional branches."""

    exit_code = 9


class NonConvergence(SqrtAtlasError):
    exit_code = 9


class AmbiguousSpectrum(SqrtAtlasError):
    """Eigenvalue clusters cannot be separated into real / non-real families."""

    exit_code = 9


class ResidualTooLarge(SqrtAtlasError):
    exit_code = 9
