"""Exceptions shared across the library."""


class DimensionError(ValueError):
    """Vector or matrix widths do not match the declared layer sizes."""


class InvalidClassError(ValueError):
    """Class count or class index outside the valid range."""


class DataFormatError(ValueError):
    """A dataset or model file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class FoldError(ValueError):
    """Requested fold count cannot be satisfied by the dataset."""


class DivergenceError(RuntimeError):
    """Training produced a non-finite error value."""

    def __init__(self, iteration: int, message: str | None = None):
        super().__init__(
            message or f"training error became non-finite at iteration {iteration}"
        )
        self.iteration = iteration


class ProtocolMismatchError(ValueError):
    """Experiment reports being compared come from different protocols."""
