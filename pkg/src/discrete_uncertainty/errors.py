"""Exception types shared across the package."""


class ComputationError(ValueError):
    """A well-formed input for which the requested quantity cannot be computed.

    Subclasses ``ValueError`` so that library callers can catch both kinds of
    failure in one place; the CLI maps this class to exit code 2 and plain
    ``ValueError`` (bad input) to exit code 1.
    """
