class DomainError(ValueError):
    """Input lies outside the domain where a quantity is defined."""


class TransportError(RuntimeError):
    """Parallel transport of a dual pair failed to preserve the pairing."""
