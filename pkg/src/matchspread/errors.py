"""Exception types shared across the package."""


class MatchspreadError(Exception):
    """Base class for package-specific errors."""


class InfeasibleSizeError(MatchspreadError):
    """An exact computation was requested beyond its enumeration ceiling."""


class ConfigError(MatchspreadError):
    """A CLI or experiment configuration is malformed."""
