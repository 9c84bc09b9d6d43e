"""Exception hierarchy.

Every error a caller can trigger through bad input derives from
:class:`PreconditionError`; the CLI maps those to exit code 3.  Anything
deriving from :class:`InvariantBreach` means the library contradicted
itself and should never be seen.
"""


class JacringError(Exception):
    pass


class PreconditionError(JacringError, ValueError):
    pass


class InvariantBreach(JacringError, AssertionError):
    pass


class PrimeReductionError(PreconditionError):
    """A rational coefficient has a denominator divisible by the prime."""


class CharacteristicTooSmall(PreconditionError):
    pass


class NotHomogeneousError(PreconditionError):
    pass


class DegreeOutOfRange(PreconditionError):
    pass


class SingularRingError(PreconditionError):
    pass


class AlphaInIdeal(PreconditionError):
    """The element vanishes in the quotient, so its projective class is undefined."""


class ZeroVectorError(PreconditionError):
    pass


class InconsistentSystem(PreconditionError):
    pass


class PolynomialSyntaxError(JacringError, ValueError):
    pass
