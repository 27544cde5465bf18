"""Exception hierarchy shared by all schurz modules."""


class SchurzError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SchurzError, ValueError):
    """Malformed index text.  ``offset`` is the 0-based byte position of the problem."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class NotProperError(SchurzError, ValueError):
    """A connector word violates the (weak) properness condition."""


class AdmissibilityError(SchurzError, ValueError):
    """An index, tableau, poset or word is not admissible (the value would diverge)."""


class MembershipError(SchurzError, ValueError):
    """A labeled word is outside the set an operation is defined on."""


class ShapeError(SchurzError, ValueError):
    """A cell set is not a connected skew Young diagram."""


class CapExceeded(SchurzError, RuntimeError):
    """A configured complexity cap (elements, weight, loop budget) would be exceeded."""
