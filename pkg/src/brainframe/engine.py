"""Step-synchronous network simulator.

Two backends share identical numerical semantics: a sequential oracle
and a partitioned data-parallel backend (thread pool + one barrier per
step). Per-neuron updates accumulate gap-junction terms in ascending
neighbor index order, so parallel traces are bitwise-identical to
sequential ones for any worker count.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .errors import ConfigError, NumericDivergenceError
from .model import (
    DEFAULT_CONDUCTANCES,
    DEFAULT_DT_MS,
    STATE_SIZE,
    ConductanceSet,
    ConnectivityMatrix,
    EvokedInputSchedule,
    NeuronState,
    UseCase,
    default_initial_state,
)

_EMPTY_WEIGHTS = np.zeros((1, 1))


@dataclass
class NetworkState:
    """Double-buffered network state: reads target `current`, writes
    target `next`, buffers swap exactly once per step."""

    n: int
    current: np.ndarray  # (n, 19)
    next: np.ndarray     # (n, 19)
    step_index: int = 0

    @classmethod
    def initial(cls, n: int, init: NeuronState | None = None) -> "NetworkState":
        row = (init or default_initial_state()).to_array()
        cur = np.tile(row, (n, 1))
        return cls(n=n, current=cur, next=np.zeros_like(cur))

    def swap(self) -> None:
        self.current, self.next = self.next, self.current
        self.step_index += 1


@dataclass(frozen=True)
class SimulationConfig:
    use_case: UseCase
    n: int
    duration_steps: int
    connectivity: ConnectivityMatrix | None = None
    dt: float = DEFAULT_DT_MS
    inputs: EvokedInputSchedule = EvokedInputSchedule()
    backend: str = "sequential"  # "sequential" | "parallel"
    workers: int = 1
    record_stride: int = 1
    record_neurons: tuple[int, ...] | None = None  # None = all
    seed: int = 0
    precision: str = "fp64"  # "fp64" | "fp32"
    conductances: ConductanceSet = DEFAULT_CONDUCTANCES
    initial_state: NeuronState | None = None

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.duration_steps < 1:
            raise ConfigError("duration_steps must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.backend not in ("sequential", "parallel"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.record_stride < 1:
            raise ConfigError("record_stride must be >= 1")
        if self.precision not in ("fp64", "fp32"):
            raise ConfigError(f"unknown precision {self.precision!r}")
        if self.use_case is not UseCase.NGJ:
            if self.connectivity is None:
                raise ConfigError(f"{self.use_case.value} requires a connectivity matrix")
            if self.connectivity.n != self.n:
                raise ConfigError(
                    f"connectivity is {self.connectivity.n}x{self.connectivity.n}, "
                    f"network has {self.n} cells")
        if self.record_neurons is not None:
            bad = [i for i in self.record_neurons if not 0 <= i < self.n]
            if bad:
                raise ConfigError(f"recorded neuron indices out of range: {bad}")

    def digest(self) -> str:
        payload = {
            "use_case": self.use_case.value,
            "n": self.n,
            "duration_steps": self.duration_steps,
            "dt": self.dt,
            "density": None if self.connectivity is None else self.connectivity.density,
            "weights_sha": None if self.connectivity is None else hashlib.sha256(
                np.ascontiguousarray(self.connectivity.weights).tobytes()).hexdigest(),
            "pulses": [(p.start_step, p.end_step, p.amplitude,
                        sorted(p.target) if p.target is not None else None)
                       for p in self.inputs.pulses],
            "record_stride": self.record_stride,
            "record_neurons": list(self.record_neurons) if self.record_neurons else None,
            "seed": self.seed,
            "precision": self.precision,
            "conductances": list(self.conductances.to_array()),
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class Trace:
    """Recorded axon voltages: vaxon[r, c] is the voltage of
    neurons[c] at steps[r]. Metadata carries the config digest and
    wall-clock per-step statistics."""

    steps: np.ndarray            # recorded step indices
    neurons: np.ndarray          # recorded neuron indices
    vaxon: np.ndarray            # (len(steps), len(neurons))
    metadata: dict = field(default_factory=dict)

    @property
    def row_count(self) -> int:
        return self.vaxon.size

    def rows(self):
        for r, s in enumerate(self.steps):
            for c, i in enumerate(self.neurons):
                yield int(s), int(i), float(self.vaxon[r, c])


def partition(n: int, workers: int) -> list[tuple[int, int]]:
    """Contiguous near-uniform ranges; sizes differ by at most 1. With
    more workers than neurons, each of the first n workers gets one
    neuron and the rest stay idle."""
    if n < 1 or workers < 1:
        raise ConfigError("n and workers must be >= 1")
    workers = min(workers, n)
    base, rem = divmod(n, workers)
    ranges = []
    lo = 0
    for w in range(workers):
        hi = lo + base + (1 if w < rem else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def step(state: NetworkState,
         weights: np.ndarray | None,
         use_case: UseCase,
         inputs_at_step: np.ndarray,
         cond: ConductanceSet = DEFAULT_CONDUCTANCES,
         dt: float = DEFAULT_DT_MS) -> NetworkState:
    """Advance the network by one step (sequential path) and swap."""
    w = _EMPTY_WEIGHTS if weights is None else weights
    _kernels.compute_range(state.current, state.next, w, use_case.code,
                           inputs_at_step, dt, cond.to_array(), 0, state.n)
    state.swap()
    return state


def simulate(config: SimulationConfig) -> Trace:
    """Run the configured simulation and return the recorded trace.

    Raises NumericDivergenceError (with the step index) on the first
    non-finite state value.
    """
    config.validate()
    dtype = np.float64 if config.precision == "fp64" else np.float32

    n = config.n
    state = NetworkState.initial(n, config.initial_state)
    state.current = state.current.astype(dtype)
    state.next = state.next.astype(dtype)

    if config.use_case is UseCase.NGJ or config.connectivity is None:
        weights = _EMPTY_WEIGHTS.astype(dtype)
    else:
        weights = np.ascontiguousarray(config.connectivity.weights, dtype=dtype)
    cond = config.conductances.to_array().astype(dtype)
    case = config.use_case.code
    dt = dtype(config.dt)

    rec_neurons = (np.arange(n) if config.record_neurons is None
                   else np.asarray(config.record_neurons, dtype=int))
    rec_steps = np.arange(0, config.duration_steps, config.record_stride)
    vaxon = np.empty((len(rec_steps), len(rec_neurons)), dtype=dtype)

    i_evoked = np.zeros(n, dtype=dtype)
    scratch = np.zeros(n)
    step_times = np.empty(config.duration_steps)

    pool = None
    ranges = [(0, n)]
    if config.backend == "parallel" and config.workers > 1:
        ranges = partition(n, config.workers)
        if len(ranges) > 1:
            pool = ThreadPoolExecutor(max_workers=len(ranges))

    rec_pos = 0
    try:
        for s in range(config.duration_steps):
            config.inputs.currents_at(s, n, scratch)
            i_evoked[:] = scratch
            t0 = time.perf_counter()
            if pool is None:
                _kernels.compute_range(state.current, state.next, weights, case,
                                       i_evoked, dt, cond, 0, n)
            else:
                futs = [pool.submit(_kernels.compute_range, state.current,
                                    state.next, weights, case, i_evoked, dt,
                                    cond, lo, hi)
                        for lo, hi in ranges]
                # waiting on every range is the per-step barrier
                for f in futs:
                    f.result()
            step_times[s] = time.perf_counter() - t0
            if not np.isfinite(state.next).all():
                raise NumericDivergenceError(s)
            state.swap()
            if rec_pos < len(rec_steps) and rec_steps[rec_pos] == s:
                vaxon[rec_pos] = state.current[rec_neurons, 2]
                rec_pos += 1
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    metadata = {
        "config_digest": config.digest(),
        "n": n,
        "use_case": config.use_case.value,
        "dt_ms": config.dt,
        "duration_steps": config.duration_steps,
        "backend": config.backend,
        "workers": config.workers,
        "precision": config.precision,
        "step_seconds_min": float(step_times.min()),
        "step_seconds_mean": float(step_times.mean()),
        "step_seconds_max": float(step_times.max()),
    }
    return Trace(steps=rec_steps, neurons=rec_neurons, vaxon=vaxon,
                 metadata=metadata)


def run_parallel(config: SimulationConfig) -> Trace:
    """Convenience wrapper: force the parallel backend."""
    if config.backend != "parallel":
        config = replace(config, backend="parallel")
    return simulate(config)


# Published per-step operation constants (profile-derived); the surrogate
# kernel's true micro-op counts are documented alongside so the delta is
# visible rather than hidden.
PUBLISHED_CELL_OPS = 859
PUBLISHED_GJ_OPS = {UseCase.RGJ: 12, UseCase.SGJ: 4, UseCase.NGJ: 0}
# hand count of FP ops in _kernels: per GJ term RGJ = sub, mul, mul, div,
# neg, exp, 2 mul, add-0.2, mul, mul, add-acc; SGJ = sub, mul, add
SURROGATE_GJ_OPS = {UseCase.RGJ: 12, UseCase.SGJ: 3, UseCase.NGJ: 0}


def count_step_ops(use_case: UseCase,
                   n: int,
                   connectivity: ConnectivityMatrix | None = None,
                   cell_ops: int = PUBLISHED_CELL_OPS,
                   gj_ops: dict[UseCase, int] = PUBLISHED_GJ_OPS) -> int:
    """Instrumented counting pass over the engine's loop structure:
    walks every neuron and every nonzero connection exactly as
    compute_range does, incrementing the given per-item constants."""
    total = 0
    per_conn = gj_ops[use_case]
    for i in range(n):
        total += cell_ops
        if use_case is not UseCase.NGJ and connectivity is not None:
            total += per_conn * int(np.count_nonzero(connectivity.weights[i]))
    return total
