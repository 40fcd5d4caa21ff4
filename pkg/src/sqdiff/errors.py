"""Exception hierarchy shared by every module."""


class SqdiffError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(SqdiffError, ValueError):
    pass


class InvalidDenominator(InvalidArgument):
    pass


class DomainError(InvalidArgument):
    """A formula was evaluated outside the range where it is defined."""


class PreconditionError(InvalidArgument):
    pass


class ResourceError(SqdiffError):
    """A configured tuple, memory or enumeration budget would be exceeded."""


class ScaleError(SqdiffError):
    """The input is too small for the requested parameters (e.g. N' < 1)."""


class SparseBranch(SqdiffError):
    """Raised when a set is too sparse for spectrum extraction."""


class ConfigError(SqdiffError, ValueError):
    pass
