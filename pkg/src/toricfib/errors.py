"""Exception types shared across the package.

Mathematical failures derive from ToricError; malformed input documents
derive from DocumentError.  The CLI maps the former to exit code 1 and the
latter to exit code 2.
"""


class ToricError(Exception):
    """Base class for mathematically meaningful failures."""


class ZeroVectorError(ToricError):
    pass


class NotSurjectiveError(ToricError):
    """A lattice map that was required to be surjective is not.

    Carries the image sublattice and its index (None when infinite).
    """

    def __init__(self, message, image=None, index=None):
        super().__init__(message)
        self.image = image
        self.index = index


class InfiniteIndexError(ToricError):
    pass


class InvalidFanError(ToricError):
    pass


class NotPrimitiveError(ToricError):
    pass


class NotInSupportError(ToricError):
    pass


class NotUnimodularError(ToricError):
    pass


class NotQCartierError(ToricError):
    """No linear functional matches the prescribed values on some cone."""

    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class CoefficientOutOfRangeError(ToricError):
    pass


class NotSimplicialError(ToricError):
    pass


class AlphaOutOfRangeError(ToricError):
    pass


class ConeNotMappedError(ToricError):
    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class FinitePartError(ToricError):
    """The lattice map is not surjective; factorization data attached.

    `image` is the image sublattice, `index` its index in the target
    (None when the index is infinite).
    """

    def __init__(self, message, image=None, index=None):
        super().__init__(message)
        self.image = image
        self.index = index


class RayNotDominatedError(ToricError):
    pass


class NotATargetRayError(ToricError):
    pass


class DirectionOutsideImageError(ToricError):
    pass


class NotRelativelyTrivialError(ToricError):
    pass


class NotMFSError(ToricError):
    pass


class WrongRayCountError(ToricError):
    pass


class NonPositiveRelationError(ToricError):
    pass


class UnknownFamilyError(ToricError):
    pass


class DocumentError(Exception):
    """Malformed or unreadable input document (CLI exit code 2)."""
