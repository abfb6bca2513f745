"""File formats: trace CSV, calibration CSV, config and batch JSON.

All writes go through a write-temp-then-rename step so partially
written artifacts are never observed.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .connectivity import ConnectivityGeneratorSpec, generate_connectivity
from .engine import SimulationConfig, Trace
from .errors import ConfigError, ParseError
from .model import EvokedInputSchedule, Pulse, UseCase
from .planner import BatchItem, ExperimentBatch
from .selector import Calibration, ExperimentSpec, Fabric

TRACE_HEADER = "step,neuron,vaxon_mV"
CALIBRATION_HEADER = "fabric,use_case,density,n,sec_per_step"


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trace(trace: Trace, path: str | Path) -> None:
    """Trace CSV plus a sidecar <path>.meta.json with the metadata."""
    lines = [TRACE_HEADER]
    lines.extend(f"{s},{i},{repr(v)}" for s, i, v in trace.rows())
    atomic_write_text(path, "\n".join(lines) + "\n")
    atomic_write_text(str(path) + ".meta.json",
                      json.dumps(trace.metadata, indent=2, sort_keys=True) + "\n")


def read_trace(path: str | Path) -> Trace:
    steps: list[int] = []
    neurons: list[int] = []
    values: list[float] = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != TRACE_HEADER:
            raise ParseError(f"bad trace header {header!r}", row=0)
        for r, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(f"expected 3 fields, got {len(parts)}", row=r)
            try:
                steps.append(int(parts[0]))
                neurons.append(int(parts[1]))
                values.append(float(parts[2]))
            except ValueError as e:
                raise ParseError(str(e), row=r) from None
    uniq_steps = sorted(set(steps))
    uniq_neurons = sorted(set(neurons))
    step_pos = {s: r for r, s in enumerate(uniq_steps)}
    neuron_pos = {i: c for c, i in enumerate(uniq_neurons)}
    vaxon = np.full((len(uniq_steps), len(uniq_neurons)), np.nan)
    for s, i, v in zip(steps, neurons, values):
        vaxon[step_pos[s], neuron_pos[i]] = v
    metadata = {}
    meta_path = Path(str(path) + ".meta.json")
    if meta_path.exists():
        metadata = json.loads(meta_path.read_text())
    return Trace(steps=np.array(uniq_steps), neurons=np.array(uniq_neurons),
                 vaxon=vaxon, metadata=metadata)


def write_calibration(entries, path: str | Path) -> None:
    """entries: iterable of (Fabric, UseCase, density, n, sec_per_step)."""
    lines = [CALIBRATION_HEADER]
    lines.extend(f"{f.value},{u.value},{repr(float(d))},{int(n)},{repr(float(s))}"
                 for f, u, d, n, s in entries)
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_calibration(path: str | Path) -> Calibration:
    entries = []
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CALIBRATION_HEADER.split(","):
            raise ParseError(f"bad calibration header {header!r}", row=0)
        for r, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != 5:
                raise ParseError(f"expected 5 fields, got {len(row)}", row=r)
            try:
                entries.append((Fabric(row[0].strip().upper()),
                                UseCase(row[1].strip().lower()),
                                float(row[2]), int(row[3]), float(row[4])))
            except ValueError as e:
                raise ParseError(str(e), row=r) from None
    return Calibration(entries)


def read_batch(path: str | Path) -> ExperimentBatch:
    """Batch JSON: list of objects with use_case, n, density, real_time
    and brain_seconds."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"bad batch JSON: {e}") from None
    if not isinstance(data, list):
        raise ParseError("batch file must hold a JSON list")
    items = []
    for r, obj in enumerate(data):
        try:
            spec = ExperimentSpec(
                use_case=UseCase(obj["use_case"].lower()),
                n=int(obj["n"]),
                density=float(obj.get("density", 0.0)),
                real_time=bool(obj.get("real_time", False)),
            )
            items.append(BatchItem(spec=spec, brain_seconds=float(obj["brain_seconds"])))
        except (KeyError, ValueError, AttributeError) as e:
            raise ParseError(f"bad batch entry: {e}", row=r) from None
    return ExperimentBatch(items=tuple(items))


def config_to_dict(config: SimulationConfig,
                   connectivity_spec: ConnectivityGeneratorSpec | None = None) -> dict:
    return {
        "use_case": config.use_case.value,
        "n": config.n,
        "duration_steps": config.duration_steps,
        "dt": config.dt,
        "connectivity": None if connectivity_spec is None else {
            "kind": connectivity_spec.kind,
            "p": connectivity_spec.p,
            "seed": connectivity_spec.seed,
            "weight": connectivity_spec.weight,
            "path": connectivity_spec.path,
        },
        "pulses": [
            {"start_step": p.start_step, "end_step": p.end_step,
             "amplitude": p.amplitude,
             "target": sorted(p.target) if p.target is not None else None}
            for p in config.inputs.pulses
        ],
        "backend": config.backend,
        "workers": config.workers,
        "record_stride": config.record_stride,
        "record_neurons": (list(config.record_neurons)
                           if config.record_neurons is not None else None),
        "seed": config.seed,
        "precision": config.precision,
    }


def config_from_dict(data: dict) -> SimulationConfig:
    try:
        use_case = UseCase(data["use_case"].lower())
        n = int(data["n"])
        conn = None
        if data.get("connectivity") is not None:
            c = data["connectivity"]
            spec = ConnectivityGeneratorSpec(
                kind=c["kind"], p=float(c.get("p", 1.0)),
                seed=int(c.get("seed", 0)),
                weight=float(c.get("weight", 0.04)),
                path=c.get("path"))
            conn = generate_connectivity(spec, n)
        pulses = tuple(
            Pulse(start_step=int(p["start_step"]), end_step=int(p["end_step"]),
                  amplitude=float(p["amplitude"]),
                  target=(frozenset(p["target"]) if p.get("target") is not None
                          else None))
            for p in data.get("pulses", ()))
        return SimulationConfig(
            use_case=use_case,
            n=n,
            duration_steps=int(data["duration_steps"]),
            connectivity=conn,
            dt=float(data.get("dt", 0.05)),
            inputs=EvokedInputSchedule(pulses=pulses),
            backend=data.get("backend", "sequential"),
            workers=int(data.get("workers", 1)),
            record_stride=int(data.get("record_stride", 1)),
            record_neurons=(tuple(data["record_neurons"])
                            if data.get("record_neurons") is not None else None),
            seed=int(data.get("seed", 0)),
            precision=data.get("precision", "fp64"),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"bad config: {e}") from None
