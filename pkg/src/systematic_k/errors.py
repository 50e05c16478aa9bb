"""Shared exception types."""


class SystematicKError(Exception):
    """Base class for all library errors."""


class SpecMismatchError(SystematicKError):
    """Operands belong to different group or ring specifications."""


class InvalidGroupError(SystematicKError):
    """A group description violates the group axioms."""


class WindowTooSmallError(SystematicKError):
    """An enumeration was truncated by the declared window.

    Raised instead of returning a possibly wrong answer when a component
    is not finitely generated inside the requested window.
    """


class NotStronglySystematicError(SystematicKError):
    """A dual basis was requested but 1 is not a sum of cross products."""


class NotIdempotentError(SystematicKError):
    pass


class NotLowerTriangularError(SystematicKError):
    pass


class MorphismViolationError(SystematicKError):
    """A matrix violates a degree constraint or the completion morphism law."""


class NonAdditiveFunctorError(SystematicKError):
    pass


class SupportViolationError(SystematicKError):
    """A ring component that must vanish for triangularity is nonzero."""


class OrderNotInvariantError(SystematicKError):
    """A declared partial order is not invariant under the declared action."""


class UnclassifiableSlotError(SystematicKError):
    """No registered rule computes K0 classes over the slot's scalars."""


class BudgetExceededError(SystematicKError):
    pass
