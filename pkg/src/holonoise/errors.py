"""Shared exception types."""


class ConfigurationError(ValueError):
    """A run/synthesis/detector configuration violates its invariants."""
