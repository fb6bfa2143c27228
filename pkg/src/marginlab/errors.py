"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Malformed input: dimension mismatch, invalid matrix shape, etc."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for the input."""


class ResourceCapError(RuntimeError):
    """The requested computation exceeds a configured size cap."""
