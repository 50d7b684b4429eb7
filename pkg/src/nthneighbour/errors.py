"""Exception types raised by the package."""


class NthNeighbourError(ValueError):
    """Base class for all input validation failures."""


class DomainError(NthNeighbourError):
    """An argument lies outside the mathematical domain of a function."""


class ParameterError(NthNeighbourError):
    """A problem parameter or run setting violates its constraints."""
