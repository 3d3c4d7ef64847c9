"""Exception types raised by the fitting pipeline."""


class FitError(Exception):
    """Base class for errors raised by this package."""


class DegenerateSubset(FitError):
    """The point subset does not determine a unique model (caller should resample)."""


class InsufficientData(FitError):
    """Fewer data points than the model's minimal subset size."""


class NotEnoughInliers(FitError):
    """The scale estimate collapsed below the K-th order statistic; hypothesis invalid."""


class EmptyGraph(FitError):
    """No hyperedge survives pruning."""


class ZeroDegreeVertex(FitError):
    """A vertex with zero degree reached the Laplacian builder (orphans not removed)."""


class ConvergenceFailure(FitError):
    """The symmetric eigensolver failed to converge."""


class NoStructuresFound(FitError):
    """Every hypothesis was discarded; there is no structure to report."""


class ParseError(FitError):
    """A dataset or result file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
