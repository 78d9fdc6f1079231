"""Exception hierarchy shared by every module of the package."""


class HierCoordError(Exception):
    """Base class for all package errors."""


class DimensionError(HierCoordError, ValueError):
    """Array shapes disagree with the game configuration."""


class DomainError(HierCoordError, ValueError):
    """An argument lies outside the domain of a function."""


class UnsupportedOrderError(HierCoordError, ValueError):
    """The efficiency function is not sigmoidal for the requested order."""


class ConvergenceError(HierCoordError, ArithmeticError):
    """A root bracket could not be established within the search bound."""


class NoUsableCarrierError(HierCoordError):
    """A player has no carrier with a strictly positive gain left."""


class NotCoordinatedError(HierCoordError, ValueError):
    """An allocation violates the one-carrier-per-player, one-player-per-carrier rule."""


class ChannelFileError(HierCoordError, ValueError):
    """A channel matrix file could not be parsed."""
