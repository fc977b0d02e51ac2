"""Exception hierarchy shared by every stage."""


class HypGrpError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HypGrpError, ValueError):
    """Malformed input: bad file, unknown letter, mismatched alphabets."""


class StateError(HypGrpError, RuntimeError):
    """An operation was called on an object in the wrong state."""


class ResourceLimitError(HypGrpError):
    """A configured cap was exceeded.

    ``stats`` carries whatever partial statistics the aborted computation
    had gathered, so callers can report how far it got.
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})
