"""PyNN-flavoured front end for the brainframe simulator.

The front end computes no numerics of its own. It builds a config JSON,
invokes the ``brainframe`` command-line tool in a subprocess, and parses
the trace CSV (plus its ``.meta.json`` sidecar) that comes back. Fabric
selection likewise goes through ``brainframe select``.
"""

from __future__ import annotations

import csv
import json
import shutil
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import BackendNotFoundError, PyhetError, SimulationBackendError

DT_MS = 0.05

FABRIC_HINTS = ("auto", "dfe", "phi", "gpu")

_current: Session | None = None


def _require_session() -> Session:
    if _current is None:
        raise PyhetError("no active session: call pyhet.setup() first")
    return _current


class AllToAllConnector:
    """Every ordered pair of distinct cells is connected."""

    def __init__(self, weight: float = 0.04):
        self.weight = weight
        self.density = 1.0

    def to_spec(self) -> dict:
        return {"kind": "all_to_all", "p": 1.0, "seed": 0,
                "weight": self.weight, "path": None}


class FixedProbabilityConnector:
    """Each ordered pair is connected independently with probability p."""

    def __init__(self, p: float, weight: float = 0.04, seed: int = 0):
        if not 0.0 <= p <= 1.0:
            raise PyhetError(f"connection probability must be in [0, 1], got {p}")
        self.p = p
        self.weight = weight
        self.seed = seed
        self.density = p

    def to_spec(self) -> dict:
        return {"kind": "fixed_density", "p": self.p, "seed": self.seed,
                "weight": self.weight, "path": None}


class FromFileConnector:
    """Weights come from a dense row-major matrix CSV."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.exists():
            raise PyhetError(f"connectivity file not found: {self.path}")
        with open(self.path) as fh:
            rows = [row for row in csv.reader(fh) if row]
        total = sum(len(row) for row in rows)
        nonzero = sum(1 for row in rows for cell in row if float(cell) != 0.0)
        self.density = nonzero / total if total else 0.0

    def to_spec(self) -> dict:
        return {"kind": "from_file", "p": 1.0, "seed": 0,
                "weight": 0.04, "path": str(self.path)}


class Population:
    """A group of identical InfOli (three-compartment HH) cells."""

    def __init__(self, size: int, cell_type: str = "InfOli",
                 label: str | None = None):
        if cell_type != "InfOli":
            raise PyhetError(f"unsupported cell type {cell_type!r}")
        if size < 1:
            raise PyhetError("population size must be positive")
        self.size = size
        self.cell_type = cell_type
        self.label = label or f"population{size}"
        self.pulses: list[dict] = []
        self.recorded: tuple[int, ...] | None = None
        self.record_stride = 1
        _require_session()._register_population(self)

    def inject_pulse(self, start_ms: float, stop_ms: float, amplitude: float,
                     cells: list[int] | None = None) -> None:
        """Constant current over [start_ms, stop_ms), uA/cm^2."""
        start = round(start_ms / DT_MS)
        end = round(stop_ms / DT_MS) - 1
        if end < start:
            raise PyhetError(f"empty pulse window [{start_ms}, {stop_ms}) ms")
        self.pulses.append({"start_step": start, "end_step": end,
                            "amplitude": amplitude,
                            "target": sorted(cells) if cells is not None else None})

    def record(self, cells: list[int] | None = None, stride: int = 1) -> None:
        """Record axon voltage for the given cells (default: all)."""
        if stride < 1:
            raise PyhetError("record stride must be >= 1")
        self.recorded = tuple(sorted(cells)) if cells is not None else None
        self.record_stride = stride


class Projection:
    """Gap-junction coupling within a population."""

    def __init__(self, pre: Population, post: Population, connector,
                 gj_model: str = "realistic"):
        if pre is not post:
            raise PyhetError("gap junctions connect a population to itself")
        if gj_model not in ("realistic", "simplified"):
            raise PyhetError(f"unknown gap-junction model {gj_model!r}")
        self.population = pre
        self.connector = connector
        self.gj_model = gj_model
        _require_session()._register_projection(self)


@dataclass
class ResultHandle:
    """Pointers to the artifacts a run produced."""

    trace_path: Path
    config_path: Path
    steps: int
    dt_ms: float
    fabric: str
    decision: dict | None


@dataclass
class TraceData:
    """Recorded axon voltages: vaxon[t, i] for steps[t], neurons[i]."""

    steps: np.ndarray
    neurons: np.ndarray
    vaxon: np.ndarray
    metadata: dict = field(default_factory=dict)

    def samples_per_neuron(self) -> int:
        return int(self.vaxon.shape[0])


class Session:
    def __init__(self, fabric_hint: str = "auto",
                 executable: str = "brainframe",
                 workdir: str | Path | None = None,
                 keep_files: bool = False):
        if fabric_hint not in FABRIC_HINTS:
            raise PyhetError(
                f"fabric_hint must be one of {FABRIC_HINTS}, got {fabric_hint!r}")
        resolved = shutil.which(executable)
        if resolved is None:
            raise BackendNotFoundError(
                f"backend executable {executable!r} not found on PATH")
        self.executable = resolved
        self.fabric_hint = fabric_hint
        self.keep_files = keep_files
        self._own_workdir = workdir is None
        self.workdir = (Path(tempfile.mkdtemp(prefix="pyhet-"))
                        if workdir is None else Path(workdir))
        self.populations: list[Population] = []
        self.projections: list[Projection] = []
        self.last_decision: dict | None = None
        self._run_count = 0

    def _register_population(self, pop: Population) -> None:
        self.populations.append(pop)

    def _register_projection(self, prj: Projection) -> None:
        if self.projections:
            raise PyhetError("only one projection per session is supported")
        self.projections.append(prj)

    def _network(self) -> tuple[Population, Projection | None]:
        if len(self.populations) != 1:
            raise PyhetError(
                f"exactly one population is required, got {len(self.populations)}")
        return self.populations[0], (self.projections[0] if self.projections
                                     else None)

    def _use_case_and_density(self) -> tuple[str, float]:
        _, prj = self._network()
        if prj is None:
            return "ngj", 0.0
        case = "rgj" if prj.gj_model == "realistic" else "sgj"
        return case, prj.connector.density

    def _run_backend(self, argv: list[str]) -> str:
        proc = subprocess.run([self.executable, *argv],
                              capture_output=True, text=True)
        if proc.returncode != 0:
            raise SimulationBackendError(proc.returncode, proc.stderr)
        return proc.stdout

    def _select_fabric(self) -> dict:
        pop, _ = self._network()
        case, density = self._use_case_and_density()
        out = self._run_backend(["select", "--case", case,
                                 "--n", str(pop.size),
                                 "--density", repr(float(density))])
        return json.loads(out)

    def build_config(self, duration_ms: float) -> dict:
        pop, prj = self._network()
        steps = round(duration_ms / DT_MS)
        if steps < 1:
            raise PyhetError(f"duration {duration_ms} ms is below one step")
        case, _ = self._use_case_and_density()
        return {
            "use_case": case,
            "n": pop.size,
            "duration_steps": steps,
            "dt": DT_MS,
            "connectivity": prj.connector.to_spec() if prj else None,
            "pulses": pop.pulses,
            "backend": "sequential",
            "workers": 1,
            "record_stride": pop.record_stride,
            "record_neurons": (list(pop.recorded)
                               if pop.recorded is not None else None),
            "seed": 0,
            "precision": "fp64",
        }


def setup(fabric_hint: str = "auto", executable: str = "brainframe",
          workdir: str | Path | None = None,
          keep_files: bool = False) -> Session:
    """Start a session; the returned Session is also the module default."""
    global _current
    _current = Session(fabric_hint, executable, workdir, keep_files)
    return _current


def run(duration_ms: float, session: Session | None = None) -> ResultHandle:
    """Simulate the session's network for duration_ms of model time."""
    sess = session or _require_session()
    decision = None
    fabric = sess.fabric_hint
    if fabric == "auto":
        decision = sess._select_fabric()
        sess.last_decision = decision
        fabric = decision["fabric"].lower()
    config = sess.build_config(duration_ms)
    sess._run_count += 1
    config_path = sess.workdir / f"run{sess._run_count}.config.json"
    trace_path = sess.workdir / f"run{sess._run_count}.trace.csv"
    config_path.write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")
    sess._run_backend(["simulate", "--config", str(config_path),
                       "--out", str(trace_path)])
    return ResultHandle(trace_path=trace_path, config_path=config_path,
                        steps=config["duration_steps"], dt_ms=DT_MS,
                        fabric=fabric, decision=decision)


def get_data(handle: ResultHandle) -> TraceData:
    """Load a run's trace CSV (and metadata sidecar) into arrays."""
    steps: list[int] = []
    neurons: list[int] = []
    values: list[float] = []
    with open(handle.trace_path) as fh:
        header = fh.readline().strip()
        if header != "step,neuron,vaxon_mV":
            raise PyhetError(f"unexpected trace header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            s, i, v = line.split(",")
            steps.append(int(s))
            neurons.append(int(i))
            values.append(float(v))
    uniq_steps = sorted(set(steps))
    uniq_neurons = sorted(set(neurons))
    row = {s: r for r, s in enumerate(uniq_steps)}
    col = {i: c for c, i in enumerate(uniq_neurons)}
    vaxon = np.full((len(uniq_steps), len(uniq_neurons)), np.nan)
    for s, i, v in zip(steps, neurons, values):
        vaxon[row[s], col[i]] = v
    metadata = {}
    meta_path = Path(str(handle.trace_path) + ".meta.json")
    if meta_path.exists():
        metadata = json.loads(meta_path.read_text())
    return TraceData(steps=np.array(uniq_steps), neurons=np.array(uniq_neurons),
                     vaxon=vaxon, metadata=metadata)


def end(session: Session | None = None) -> None:
    """Finish a session and remove its scratch files."""
    global _current
    sess = session or _current
    if sess is None:
        return
    if sess._own_workdir and not sess.keep_files:
        shutil.rmtree(sess.workdir, ignore_errors=True)
    if sess is _current:
        _current = None
