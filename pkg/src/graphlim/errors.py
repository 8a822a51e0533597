"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is malformed or outside its documented domain."""


class CapacityError(ParameterError):
    """An exact routine was asked for an instance above its size cap."""


class InfeasibleError(ValueError):
    """A constraint set is empty or a constraint is violated."""
