"""Exception hierarchy shared by all harmoniter modules."""


class HarmoniterError(Exception):
    """Base class for all errors raised by this package."""


class NotPrimeError(HarmoniterError, ValueError):
    """A valuation or scan was requested for a non-prime modulus."""


class EmptyInputError(HarmoniterError, ValueError):
    """An operation requiring a nonempty collection received an empty one."""


class ResourceLimitError(HarmoniterError):
    """An exact computation exceeded its configured bit budget."""


class DomainError(HarmoniterError, ValueError):
    """An argument fell outside the mathematical domain of the operation."""


class HyperpowerOverflowError(HarmoniterError, OverflowError):
    """A hyperpower of e too large for double precision was requested."""


class UnsupportedOrderError(HarmoniterError, ValueError):
    """A summation order beyond the supported range was requested."""


class CheckpointError(HarmoniterError):
    """Base class for checkpoint load failures."""


class CorruptCheckpointError(CheckpointError):
    """Checkpoint file is unreadable or its content digest does not match."""


class VersionMismatchError(CheckpointError):
    """Checkpoint was written with an incompatible format version."""


class PrecisionExhaustedError(HarmoniterError):
    """A modular valuation accumulator could no longer certify a result.

    Callers retry with a larger working precision; with the defaults this
    only happens if a partial sum cancels to far deeper p-adic depth than
    anything observed in practice.
    """


class InternalError(HarmoniterError):
    """An invariant that must hold mathematically was violated."""
