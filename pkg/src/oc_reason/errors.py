"""Exception types shared across the package."""


class InputError(ValueError):
    """Raised when an operation is called with invalid or out-of-contract input.

    Covers malformed structures (bad domains, mismatched relation dimensions),
    unknown identifiers, and violated operation preconditions.
    """
