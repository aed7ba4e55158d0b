"""Exception hierarchy shared by all modules."""


class MoveStructError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MoveStructError, ValueError):
    """Input data violates a structural invariant."""


class ParameterError(MoveStructError, ValueError):
    """A tuning parameter (e.g. alpha) is out of range."""


class FormatError(MoveStructError, ValueError):
    """A serialized stream is malformed.

    ``offset`` is the byte offset (binary formats) or 1-based line number
    (text formats) where the problem was detected, when known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at {offset})"
        super().__init__(message)
        self.offset = offset


class StateError(MoveStructError, RuntimeError):
    """Operation called on an object in the wrong lifecycle state."""


class CapacityError(MoveStructError, RuntimeError):
    """The balancer arena overflowed its preallocated bound.

    This can only happen if the interval-count bound is violated, i.e. a bug.
    """


class SinkError(MoveStructError, RuntimeError):
    """A consumer of streamed output failed; ``position`` is how many values
    had been delivered successfully before the failure."""

    def __init__(self, position, cause):
        super().__init__(f"sink failed after {position} values: {cause!r}")
        self.position = position
        self.__cause__ = cause
