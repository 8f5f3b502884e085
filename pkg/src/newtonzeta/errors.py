"""Exception types shared by every module."""


class PreconditionError(ValueError):
    """An input violates a hypothesis the requested formula depends on."""


class InconsistencyError(RuntimeError):
    """Two computations that must agree did not (signals a bug or a false hypothesis)."""
