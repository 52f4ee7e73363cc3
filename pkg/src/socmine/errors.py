"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: UsageError -> 1, DataError -> 2,
anything else -> 3.
"""


class UsageError(Exception):
    """Bad command-line arguments or configuration."""


class DataError(Exception):
    """Malformed or inconsistent input data."""
