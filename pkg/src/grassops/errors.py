"""Exception types shared across the package."""


class GrassopsError(Exception):
    """Base class for errors raised by this package."""


class UsageError(GrassopsError):
    """A caller passed arguments outside the supported domain."""


class EngineDefectError(GrassopsError):
    """An internal consistency check failed.

    Raised when two routes that must agree by construction (for example a
    component formula and its realization through explicit tensors) produce
    different answers.  This always indicates a defect in the engine rather
    than bad input, and callers should treat it as non-recoverable.
    """
