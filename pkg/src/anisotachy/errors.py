"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad input: parameter out of range, malformed config, impossible request."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or lost too much accuracy."""


class DegeneracyError(NumericalError):
    """A residue denominator vanished: two characteristic roots coalesced."""
