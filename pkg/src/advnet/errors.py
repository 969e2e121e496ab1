"""Exception hierarchy.

Errors fall into three buckets that the CLI maps to exit codes: invalid input
(exit 2), budget/size limits (exit 3), and everything else.
"""

from __future__ import annotations


class AdvnetError(Exception):
    """Base class for all package errors."""


class InvalidInput(AdvnetError):
    """The caller supplied data that violates a documented precondition."""


class LimitExceeded(AdvnetError):
    """A computation was refused or stopped because of a size/time budget."""


# netgraph
class InvalidNetwork(InvalidInput):
    pass


class CyclicGraph(InvalidNetwork):
    pass


class SourceHasInEdges(InvalidNetwork):
    pass


class TerminalHasOutEdges(InvalidNetwork):
    pass


class UnreachableTerminal(InvalidNetwork):
    pass


class DanglingIntermediate(InvalidNetwork):
    pass


class EmptyTerminalSet(InvalidNetwork):
    pass


class Unreachable(InvalidInput):
    pass


class NotATerminal(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class TooManyVertices(LimitExceeded):
    pass


# channel
class WordOutsideDomain(InvalidInput):
    pass


class DomainTooLarge(LimitExceeded):
    pass


class SpaceMismatch(InvalidInput):
    pass


# gf
class NotPrimePower(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class DecodeFailure(AdvnetError):
    pass


class FieldTooSmall(InvalidInput):
    """Raised when a construction needs a larger alphabet.

    ``threshold`` is the smallest alphabet size the construction accepts.
    """

    def __init__(self, message: str, threshold: int):
        super().__init__(message)
        self.threshold = threshold


# netcode
class ArityMismatch(InvalidInput):
    pass


class ErrorOutsideVulnerableSet(InvalidInput):
    pass


class NotPreceding(InvalidInput):
    pass


class FieldMismatch(InvalidInput):
    pass


# schemes / bounds / reduce
class ParameterOutOfRange(InvalidInput):
    pass


class NotTwoLevel(InvalidInput):
    pass


class UnknownFamily(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    pass


class NotSimple3Level(InvalidInput):
    pass


class InvalidCutPair(InvalidInput):
    pass


# search
class BudgetExceeded(LimitExceeded):
    """Search stopped early; ``certificate`` holds the best result found."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate
