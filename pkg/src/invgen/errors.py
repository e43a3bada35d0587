"""Exception hierarchy shared across the package."""


class InvgenError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(InvgenError):
    """Bad input: malformed cycle types, invalid family/event combinations, etc."""


class CapacityError(InvgenError):
    """Exact-mode request beyond the configured enumeration limits."""


class NoSolutionError(InvgenError):
    """Threshold solver could not find a finite answer."""
