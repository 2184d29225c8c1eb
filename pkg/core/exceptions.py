"""Exceptions raised by the solver kernel.

Everything derives from ``CdsatError`` so callers (management commands, the
API view) can separate solver failures from programming errors.
"""


class CdsatError(Exception):
    """Base class for all solver errors."""


class IllSorted(CdsatError):
    """A term or assignment violates the sort discipline."""


class NonLinearTerm(IllSorted):
    """A product of two non-constant arithmetic terms."""


class NotBoolean(CdsatError):
    """A Boolean-only operation was applied to a first-order assignment."""


class TermAlreadyAssigned(CdsatError):
    """The trail already holds an assignment for this term."""

    def __init__(self, term):
        super().__init__(f"term {term} is already assigned")
        self.term = term


class JustificationOutOfRange(CdsatError):
    """A deduction cites a trail index that does not precede it."""


class EmptyConflict(CdsatError):
    pass


class MalformedNode(CdsatError):
    """A proof node violates the side condition of its rule."""


class LcfRejection(MalformedNode):
    """The LCF kernel refused to build a theorem."""


class UncheckedProof(CdsatError):
    """Export was requested for a proof the checker does not accept."""


class UnsupportedCore(CdsatError):
    """A black-box oracle returned a core without a Boolean element."""


class EndorsementFailure(CdsatError):
    """An extracted model does not endorse an input assignment."""


class KernelError(CdsatError):
    """The transition system reached a state no rule covers."""


class TooLarge(CdsatError):
    """A problem exceeds the bounds of a brute-force oracle."""


class ProofFormatError(CdsatError):
    """A proof file does not follow its grammar."""
