class Error(Exception):
    """Base class for custom exceptions in fdaloha."""

    pass


class ParameterError(Error):
    """Exception raised when a model or configuration value violates one of its
    invariants, e.g. ``alpha <= 2`` or ``eta > 1``."""

    def __init__(self, message):
        self.message = message


class QuadratureError(Error):
    """Exception raised when an adaptive quadrature does not reach the requested
    tolerance within the allowed number of subdivisions."""

    def __init__(self, message):
        self.message = message


class OptimizationError(Error):
    """Exception raised when an objective is not finite or a bracketed search pins
    its optimum to the boundary of the search range."""

    def __init__(self, message):
        self.message = message


class SimulationError(Error):
    """Exception raised when the Monte Carlo simulator is configured with
    inconsistent geometry or time windows."""

    def __init__(self, message):
        self.message = message


class KeywordError(Error):
    """Exception raised when the keyword used in the function is not appropriate or
    does not work in the given case."""

    def __init__(self, message):
        self.message = message
