"""Shared exception types."""


class AgrisimError(Exception):
    """Base class for all package errors."""


class ConfigurationError(AgrisimError, ValueError):
    """Invalid configuration or violated type invariant."""


class InputError(AgrisimError, ValueError):
    """Operation called with inputs outside its precondition."""
