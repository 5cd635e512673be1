"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`WhmfError`,
so the CLI can map them to exit codes in one place.
"""


class WhmfError(Exception):
    """Base class for all library errors."""


class UsageError(WhmfError):
    """Bad parameters supplied by a caller (maps to CLI exit code 2)."""


# series_core
class ZeroLeadingCoefficient(WhmfError):
    pass


class NonzeroConstantTerm(WhmfError):
    pass


class NonUnitDenominator(WhmfError):
    pass


class PrecisionError(WhmfError):
    """A coefficient beyond the tracked precision was requested."""


# level / eta
class InvalidLevel(UsageError):
    pass


class FractionalValuation(WhmfError):
    pass


# characters
class NotCoprime(WhmfError):
    pass


class InvalidCharacter(UsageError):
    pass


# eisenstein
class ParityMismatch(WhmfError):
    pass


class EmptyFamily(WhmfError):
    pass


class InsufficientPrecision(WhmfError):
    pass


# plus projection
class NotADivisor(UsageError):
    pass


class TailBoundTooLarge(WhmfError):
    pass


class EmptyPlusSpace(WhmfError):
    pass


class AmbiguousPlusSpace(WhmfError):
    pass


class ReconstructionFailed(WhmfError):
    pass


class ZeroConstantTerm(WhmfError):
    pass


# hauptmodul
class ConstantTermObstruction(WhmfError):
    pass


class NonIntegralCoefficient(WhmfError):
    pass


class InvarianceFailure(WhmfError):
    pass


class IdentityFailure(WhmfError):
    pass


# basis
class EmptyBelowMinimalWeight(WhmfError):
    pass


class IndexBelowRange(UsageError):
    pass


# theorem suite
class HypothesisViolated(UsageError):
    pass


# zeros
class RealityFailure(WhmfError):
    pass


class WindingAmbiguous(WhmfError):
    pass
