"""Gap-junction-coupled HH network simulation with workload profiling,
accelerator selection and batch planning."""

from .engine import (
    NetworkState,
    SimulationConfig,
    Trace,
    partition,
    run_parallel,
    simulate,
    step,
)
from .errors import (
    BrainFrameError,
    ConfigError,
    CoverageError,
    InputShapeError,
    NumericDivergenceError,
    NumericDomainError,
    ParseError,
    UnsupportedSizeError,
)
from .model import (
    DEFAULT_CONDUCTANCES,
    ConductanceSet,
    ConnectivityMatrix,
    EvokedInputSchedule,
    NeuronState,
    Pulse,
    UseCase,
    cell_update,
    default_initial_state,
    gj_current_realistic,
    gj_current_simplified,
    resting_state,
)
from .planner import BatchItem, ExperimentBatch, PlanReport, energy_joules, plan
from .profiler import (
    DfeTickModel,
    WorkloadProfile,
    compute_memory_ratio,
    estimate_dfe_ticks,
    flop_count,
    memory_accesses,
    profile,
)
from .selector import (
    Calibration,
    ExperimentClass,
    ExperimentSpec,
    Fabric,
    Scale,
    SelectionDecision,
    classify,
    rt_max_network,
    select,
)

__version__ = "0.1.0"
