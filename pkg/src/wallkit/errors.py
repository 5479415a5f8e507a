"""Exception types shared by all wallkit modules."""


class WallkitError(Exception):
    """Base class for every error raised by wallkit."""


class ValidationError(WallkitError):
    """Input data violates a structural invariant."""


class CycleDetected(ValidationError):
    pass


class NotSuccessorPair(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class EmptyBrick(ValidationError):
    pass


class CoverageFailure(ValidationError):
    pass


class GroundMismatch(ValidationError):
    pass


class EmptyOverlap(ValidationError):
    pass


class NotAPermutation(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NegativeDimension(ValidationError):
    pass


class FreenessNotAsserted(ValidationError):
    pass


class InvalidMerge(ValidationError):
    pass


class BudgetExceeded(WallkitError):
    """A request exceeds the configured enumeration budget."""


class InvariantFailure(WallkitError):
    """A checked mathematical invariant did not hold."""


class SignConventionBroken(InvariantFailure):
    pass
