from .api import (
    DT_MS,
    AllToAllConnector,
    FixedProbabilityConnector,
    FromFileConnector,
    Population,
    Projection,
    ResultHandle,
    Session,
    TraceData,
    end,
    get_data,
    run,
    setup,
)
from .errors import BackendNotFoundError, PyhetError, SimulationBackendError

__version__ = "0.1.0"

__all__ = [
    "DT_MS",
    "AllToAllConnector",
    "FixedProbabilityConnector",
    "FromFileConnector",
    "Population",
    "Projection",
    "ResultHandle",
    "Session",
    "TraceData",
    "end",
    "get_data",
    "run",
    "setup",
    "BackendNotFoundError",
    "PyhetError",
    "SimulationBackendError",
    "__version__",
]
