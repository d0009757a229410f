"""Exception hierarchy.

Everything raised on bad user input derives from InputError so the CLI can
map it to exit code 2.  CertificateError marks an internal consistency
failure (a decomposition that does not verify); the CLI maps it to exit 3.
"""


class PhmapError(Exception):
    """Base class for all package errors."""


class InputError(PhmapError):
    """Invalid data or arguments supplied by the caller."""


class NotPrimeError(InputError):
    pass


class ModulusMismatchError(InputError):
    pass


class FieldDivisionError(InputError, ZeroDivisionError):
    pass


class ShapeMismatchError(InputError):
    pass


class SingularMatrixError(InputError):
    pass


class NoSolutionError(PhmapError):
    """Linear system has no solution over the field."""


class DimMismatchError(InputError):
    pass


class EmptySetError(InputError):
    pass


class IndexMismatchError(InputError):
    pass


class AmbiguousLiftError(InputError):
    """A displacement sits exactly at half the torus period."""


class NotACycleError(InputError):
    pass


class CycleNotInComplexError(InputError):
    pass


class DegenerateSpanError(InputError):
    pass


class ChainMismatchError(InputError):
    """Consecutive sampled maps do not compose (image cloud != next domain)."""


class ParseError(InputError):
    pass


class CertificateError(PhmapError):
    """An internally produced decomposition failed its own verification."""
