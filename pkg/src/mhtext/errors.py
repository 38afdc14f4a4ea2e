"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes, so raising the right type
matters more than the message text: UsageError -> 1, DataError -> 2,
SearchFailedError -> 3.
"""


class ToolkitError(Exception):
    """Base class for errors raised deliberately by this package."""


class UsageError(ToolkitError):
    """Bad command-line arguments or an unusable experiment config."""


class DataError(ToolkitError):
    """Input data violates the documented corpus or file contracts."""


class SearchFailedError(ToolkitError):
    """Every trial of a hyperparameter search failed."""
