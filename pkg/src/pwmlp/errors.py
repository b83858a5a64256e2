"""Exception taxonomy shared by the library and the CLI.

The CLI maps these onto exit codes: usage/domain problems exit 2,
unreadable or malformed documents exit 3, numerical failures exit 4.
"""


class PwmlpError(Exception):
    """Base class for all package errors."""


class DomainError(PwmlpError):
    """A mathematical input is outside the admissible domain."""


class UsageError(PwmlpError):
    """An operation was called with structurally invalid arguments."""


class FormatError(PwmlpError):
    """A serialized document is malformed.

    ``path`` names the offending field when known, e.g.
    ``outputs[0].weights``.
    """

    def __init__(self, message, path=None):
        self.path = path
        if path is not None:
            message = "%s: %s" % (path, message)
        super().__init__(message)


class NumericalError(PwmlpError):
    """A numerical routine produced or detected an unusable result."""
