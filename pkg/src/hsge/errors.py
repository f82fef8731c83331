"""Exception types shared across the package."""


class HsgeError(Exception):
    """Base class for all library errors."""


class ParameterError(HsgeError, ValueError):
    """An argument is outside its documented domain."""


class LevelRangeError(HsgeError, IndexError):
    """A hierarchy level index is out of range."""


class InvalidGraphletError(HsgeError, ValueError):
    """An edge set does not form a connected graphlet."""


class UnknownEdgeError(HsgeError, KeyError):
    """An edge does not exist in the parent graph."""


class StateError(HsgeError, RuntimeError):
    """An operation was called in the wrong phase (e.g. on a finalized
    vocabulary, or on attributes that were never discretized)."""


class DegenerateModelError(HsgeError, ValueError):
    """Training data cannot produce a usable classifier (single class)."""


class ParseError(HsgeError, ValueError):
    """A dataset or artifact file failed to parse.

    Carries the offending path and, when known, the line number.
    """

    def __init__(self, message, path=None, line=None):
        loc = str(path) if path is not None else ""
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class FormatVersionError(HsgeError, ValueError):
    """A serialized artifact has an unsupported version tag."""
