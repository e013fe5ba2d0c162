"""Exception hierarchy shared by every module of the package."""


class L0Error(Exception):
    """Base class for all errors raised by l0calc."""


class AlgebraMismatch(L0Error, ValueError):
    """Two objects that must live in one Boolean algebra do not."""


class CapacityError(L0Error, ValueError):
    """A size cap (atoms, family sets, enumeration bound) was exceeded."""


class InvalidInput(L0Error, ValueError):
    """Malformed data: a record, a set-function table, a group table, ..."""


class PreconditionError(L0Error):
    """An operation's mathematical precondition does not hold.

    ``witness`` carries whatever object demonstrates the failure (a pair of
    elements, a group element, an atom index) so callers can report it.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAHomomorphism(PreconditionError):
    """A map declared to be a homomorphism fails on some product."""


class VerificationError(L0Error):
    """A certificate or postcondition failed to replay.

    Raised instead of returning an answer; it always signals a soundness bug
    or corrupted input, never an expected outcome.
    """
