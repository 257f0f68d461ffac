"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class NotCoprimeError(InvalidArgument):
    """Raised when a two-variable linear equation has gcd(a, b) != 1."""


class InvalidBasis(InvalidArgument):
    """Raised when a prime list is not exactly the first r primes."""


class InvalidHTuple(InvalidArgument):
    """Raised when an offset tuple does not fit the basis."""


class ResourceLimitError(RuntimeError):
    """Raised when a request exceeds the configured desk-scale ceiling."""
