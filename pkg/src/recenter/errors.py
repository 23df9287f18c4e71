"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance."""


class DegenerateInputError(ValueError):
    """The input makes the requested ratio undefined (e.g. 0/0)."""
