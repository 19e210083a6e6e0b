"""Exception types shared by all sumgroups modules."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class InvarianceError(DomainError):
    """A set that must be invariant under a multiplicative subgroup is not."""


class PreconditionError(ValueError):
    """A theorem's hypothesis is not satisfied by the supplied sets."""


class CapacityError(RuntimeError):
    """The input exceeds a hard cost or exactness budget."""


class CorruptionError(RuntimeError):
    """An existing results file cannot be parsed; refusing to touch it."""
