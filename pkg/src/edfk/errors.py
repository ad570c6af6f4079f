"""Exception hierarchy shared by every module.

The CLI maps ``ContractViolation`` to exit code 2 and ``ResourceLimitExceeded``
to exit code 3.
"""


class EdfkError(Exception):
    pass


class ContractViolation(EdfkError, ValueError):
    """An input broke a documented precondition."""


class InvalidArgument(ContractViolation):
    pass


class StructuralMismatch(ContractViolation):
    """Two graphs cannot be combined (different capacity or label universe)."""


class GraphParseError(ContractViolation):
    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class ResourceLimitExceeded(EdfkError):
    """A brute-force routine was asked to branch over more vertices than allowed."""
