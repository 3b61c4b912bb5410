"""Exception hierarchy shared by the library and the command line."""


class FatPointsError(Exception):
    """Base class for errors raised by this package."""


class MalformedInputError(FatPointsError, ValueError):
    """Input data is structurally invalid (bad shape, bad field, bad document)."""


class DegenerateConfigurationError(FatPointsError, ValueError):
    """A geometric precondition (general position, disjointness, ...) fails."""


class ResourceCapError(FatPointsError, RuntimeError):
    """A configured enumeration or retry budget would be exceeded."""


class InvariantViolation(FatPointsError, AssertionError):
    """An internal mathematical invariant failed; indicates an arithmetic bug."""
