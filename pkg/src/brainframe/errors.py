"""Exception types shared across the package."""


class BrainFrameError(Exception):
    """Base class for all package errors."""


class InputShapeError(BrainFrameError):
    """Mismatched lengths/dimensions of kernel inputs."""


class NumericDomainError(BrainFrameError):
    """Non-finite or otherwise invalid numeric input."""


class ConfigError(BrainFrameError):
    """Invalid simulation/experiment configuration."""


class NumericDivergenceError(BrainFrameError):
    """A simulation produced a non-finite value. Carries the step index."""

    def __init__(self, step_index: int, message: str | None = None):
        self.step_index = step_index
        super().__init__(message or f"non-finite state at step {step_index}")


class UnsupportedSizeError(BrainFrameError):
    """Network size outside the supported range (96..7680 cells)."""


class CoverageError(BrainFrameError):
    """Calibration data does not cover a required (fabric, experiment) pair."""


class ParseError(BrainFrameError):
    """Malformed input file. Carries row/col context when available."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        if row is not None:
            loc = f" (row {row}" + (f", col {col}" if col is not None else "") + ")"
            message = message + loc
        super().__init__(message)
