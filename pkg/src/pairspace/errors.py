"""Exception types raised across the package."""


class PairspaceError(ValueError):
    """Base class for every domain error raised by pairspace."""


class NotHermitian(PairspaceError):
    pass


class NotUnitary(PairspaceError):
    pass


class NotFinite(PairspaceError):
    pass


class SectorMismatch(PairspaceError):
    pass


class NotBlockDiagonal(PairspaceError):
    pass


class ZeroVector(PairspaceError):
    pass


class NotNormalized(PairspaceError):
    pass


class NotPseudoHermitian(PairspaceError):
    pass


class NonpositiveEnergy(PairspaceError):
    pass


class InvalidDensity(PairspaceError):
    pass


class OrderingViolation(PairspaceError):
    pass


class ArityMismatch(PairspaceError):
    pass


class IndexOutOfRange(PairspaceError, IndexError):
    pass


class LastFactor(PairspaceError):
    pass


class ShapeMismatch(PairspaceError):
    pass


class ZeroProbabilityOutcome(PairspaceError):
    pass


class InvalidMember(PairspaceError):
    pass


class SingularA(PairspaceError):
    pass


class NullTranslation(PairspaceError):
    pass


class BadNormalization(PairspaceError):
    pass


class NotSpecialUnitary(PairspaceError):
    pass


class NotDiagonalizable(PairspaceError):
    pass


class ModeConflict(PairspaceError):
    pass


class UnknownKind(PairspaceError):
    pass


class ParseError(PairspaceError):
    """Malformed scenario input; carries the offending location when known."""

    def __init__(self, message, *, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
