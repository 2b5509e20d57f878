"""Exception types shared across the package."""


class ClassificationError(ValueError):
    """Requested (type letter, rank) pair is not an irreducible type."""


class DomainError(ValueError):
    """An argument is outside an operation's mathematical domain."""


class PreconditionError(ValueError):
    """A documented precondition was violated (e.g. non-dominant weight)."""


class NonGoodParamsError(ValueError):
    """Firing parameters lack the guarantee k_short = 0 => k_long = 0.

    Confluence-dependent operations refuse such parameters unless the
    caller explicitly passes ``force=True``.
    """


class InvariantViolationError(RuntimeError):
    """A structural guarantee failed at runtime; indicates a bug."""


class StepBudgetError(InvariantViolationError):
    """A stabilization exceeded its step budget (should be impossible)."""


class ResourceCapError(RuntimeError):
    """An enumeration grew past the configured point cap."""


class FitInconsistentError(RuntimeError):
    """A polynomial fit failed verification at held-out sample points."""
