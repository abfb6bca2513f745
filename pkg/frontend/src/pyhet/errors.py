class PyhetError(Exception):
    """Base class for front-end errors."""


class BackendNotFoundError(PyhetError):
    """The brainframe executable is not on PATH."""


class SimulationBackendError(PyhetError):
    """The backend exited with a nonzero status."""

    def __init__(self, returncode: int, stderr: str):
        self.returncode = returncode
        self.stderr = stderr
        super().__init__(
            f"brainframe exited with status {returncode}: {stderr.strip()}")
