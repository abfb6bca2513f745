"""Domain types and numerical kernels for the three-compartment
gap-junction-coupled HH cell.

The cell is a surrogate: each compartment (dendrite, soma, axon) carries
classic 1952 Hodgkin-Huxley Na/K/leak dynamics plus linear
inter-compartment coupling (dendrite<->soma, soma<->axon). External and
gap-junction currents enter the dendrite only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InputShapeError, NumericDomainError

STATE_SIZE = 19  # 3 voltages + 9 gates + 7 reserved
N_GATES = 9
N_RESERVED = 7
CONDUCTANCE_COUNT = 20
DEFAULT_DT_MS = 0.05  # delta = 50 us


class UseCase(Enum):
    """Gap-junction modeling detail: realistic, simplified, or none."""

    RGJ = "rgj"
    SGJ = "sgj"
    NGJ = "ngj"

    @property
    def code(self) -> int:
        return {UseCase.NGJ: _kernels.NGJ_CODE,
                UseCase.RGJ: _kernels.RGJ_CODE,
                UseCase.SGJ: _kernels.SGJ_CODE}[self]


@dataclass(frozen=True)
class NeuronState:
    """Per-cell state: 3 compartment voltages (mV), 9 gating variables
    (m, h, n per compartment, dendrite/soma/axon order) and 7 reserved
    zeros, 19 stored scalars in total."""

    vdend: float
    vsoma: float
    vaxon: float
    gates: tuple[float, ...]
    reserved: tuple[float, ...] = (0.0,) * N_RESERVED

    def __post_init__(self):
        if len(self.gates) != N_GATES:
            raise InputShapeError(f"expected {N_GATES} gates, got {len(self.gates)}")
        if len(self.reserved) != N_RESERVED:
            raise InputShapeError(
                f"expected {N_RESERVED} reserved values, got {len(self.reserved)}")
        if any(r != 0.0 for r in self.reserved):
            raise NumericDomainError("reserved entries must be 0.0")
        if not all(0.0 <= g <= 1.0 for g in self.gates):
            raise NumericDomainError("gates must lie in [0, 1]")

    def to_array(self) -> np.ndarray:
        out = np.zeros(STATE_SIZE)
        out[0:3] = (self.vdend, self.vsoma, self.vaxon)
        out[3:12] = self.gates
        return out

    @classmethod
    def from_array(cls, a: np.ndarray) -> "NeuronState":
        a = np.asarray(a, dtype=float)
        if a.shape != (STATE_SIZE,):
            raise InputShapeError(f"expected shape ({STATE_SIZE},), got {a.shape}")
        return cls(vdend=float(a[0]), vsoma=float(a[1]), vaxon=float(a[2]),
                   gates=tuple(float(x) for x in a[3:12]))


# field order matches the _kernels conductance layout
_CONDUCTANCE_FIELDS = (
    "g_na_dend", "g_k_dend", "g_leak_dend",
    "g_na_soma", "g_k_soma", "g_leak_soma",
    "g_na_axon", "g_k_axon", "g_leak_axon",
    "e_na", "e_k", "e_leak_dend", "e_leak_soma", "e_leak_axon",
    "c_m_dend", "c_m_soma", "c_m_axon",
    "g_dend_soma", "g_soma_axon", "rate_scale",
)


@dataclass(frozen=True)
class ConductanceSet:
    """20 named per-neuron parameters: channel conductances (mS/cm^2),
    reversal potentials (mV), membrane capacitances (uF/cm^2),
    inter-compartment coupling conductances and a gate-rate scale."""

    g_na_dend: float = 120.0
    g_k_dend: float = 36.0
    g_leak_dend: float = 0.3
    g_na_soma: float = 120.0
    g_k_soma: float = 36.0
    g_leak_soma: float = 0.3
    g_na_axon: float = 120.0
    g_k_axon: float = 36.0
    g_leak_axon: float = 0.3
    e_na: float = 50.0
    e_k: float = -77.0
    e_leak_dend: float = -54.387
    e_leak_soma: float = -54.387
    e_leak_axon: float = -54.387
    c_m_dend: float = 1.0
    c_m_soma: float = 1.0
    c_m_axon: float = 1.0
    g_dend_soma: float = 0.5
    g_soma_axon: float = 0.5
    rate_scale: float = 1.0

    def __post_init__(self):
        nonneg = [f for f in _CONDUCTANCE_FIELDS
                  if f.startswith(("g_", "c_m", "rate_"))]
        for f in nonneg:
            if getattr(self, f) < 0.0:
                raise NumericDomainError(f"{f} must be >= 0")

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in _CONDUCTANCE_FIELDS])


DEFAULT_CONDUCTANCES = ConductanceSet()
assert len(_CONDUCTANCE_FIELDS) == CONDUCTANCE_COUNT


@dataclass(frozen=True)
class ConnectivityMatrix:
    """Dense N x N non-negative weight matrix; row i holds the incoming
    connections of neuron i. Diagonal entries are permitted and counted
    toward density."""

    n: int
    weights: np.ndarray
    density: float

    @classmethod
    def from_weights(cls, weights: np.ndarray) -> "ConnectivityMatrix":
        weights = np.ascontiguousarray(weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise InputShapeError(f"weights must be square, got {weights.shape}")
        if (weights < 0).any():
            raise NumericDomainError("connection weights must be non-negative")
        n = weights.shape[0]
        density = float(np.count_nonzero(weights)) / (n * n)
        return cls(n=n, weights=weights, density=density)

    @classmethod
    def all_to_all(cls, n: int, weight: float = 0.04) -> "ConnectivityMatrix":
        return cls.from_weights(np.full((n, n), weight))


@dataclass(frozen=True)
class Pulse:
    """One evoked-current pulse: [start_step, end_step] inclusive,
    amplitude in uA/cm^2, target None = all neurons."""

    start_step: int
    end_step: int
    amplitude: float
    target: frozenset[int] | None = None

    def __post_init__(self):
        if self.start_step > self.end_step:
            raise NumericDomainError("start_step must be <= end_step")
        if not math.isfinite(self.amplitude):
            raise NumericDomainError("pulse amplitude must be finite")


@dataclass(frozen=True)
class EvokedInputSchedule:
    """List of evoked-current pulses applied to the dendrites."""

    pulses: tuple[Pulse, ...] = ()

    def currents_at(self, step: int, n: int, out: np.ndarray | None = None) -> np.ndarray:
        if out is None:
            out = np.zeros(n)
        else:
            out[:] = 0.0
        for p in self.pulses:
            if p.start_step <= step <= p.end_step:
                if p.target is None:
                    out += p.amplitude
                else:
                    for i in p.target:
                        out[i] += p.amplitude
        return out


def gj_current_realistic(prev_vdend: float,
                         neighbor_vdends: Sequence[float],
                         weights: Sequence[float]) -> float:
    """Aggregate realistic gap-junction current.

    Ic = sum_i w_i * f(V_i) * V_i with V_i = prev_vdend - neighbor_i and
    f(V) = 0.8*V*exp(-V*V/100) + 0.2, accumulated in index order.
    """
    if len(neighbor_vdends) != len(weights):
        raise InputShapeError(
            f"{len(neighbor_vdends)} neighbor voltages vs {len(weights)} weights")
    acc = 0.0
    for vn, w in zip(neighbor_vdends, weights):
        v = prev_vdend - vn
        f = 0.8 * v * math.exp(-1.0 * v * v / 100.0) + 0.2
        acc = acc + w * f * v
    return acc


def gj_current_simplified(prev_vdend: float,
                          neighbor_vdends: Sequence[float],
                          weights: Sequence[float]) -> float:
    """Aggregate simplified gap-junction current:
    Ic = sum_i w_i * (neighbor_i - prev_vdend), accumulated in index order."""
    if len(neighbor_vdends) != len(weights):
        raise InputShapeError(
            f"{len(neighbor_vdends)} neighbor voltages vs {len(weights)} weights")
    acc = 0.0
    for vn, w in zip(neighbor_vdends, weights):
        acc = acc + w * (vn - prev_vdend)
    return acc


def cell_update(state: NeuronState,
                cond: ConductanceSet = DEFAULT_CONDUCTANCES,
                i_gj: float = 0.0,
                i_evoked: float = 0.0,
                dt: float = DEFAULT_DT_MS) -> tuple[NeuronState, float]:
    """One fixed step of the surrogate cell. Returns the successor state
    and the new axon voltage. Pure function of its inputs."""
    a = state.to_array()
    if not (math.isfinite(i_gj) and math.isfinite(i_evoked) and math.isfinite(dt)):
        raise NumericDomainError("non-finite input current or dt")
    if not np.isfinite(a).all():
        raise NumericDomainError("non-finite neuron state")
    out = np.empty(STATE_SIZE)
    _kernels.cell_update_kernel(a, cond.to_array(), float(i_gj),
                                float(i_evoked), float(dt), out)
    new = NeuronState.from_array(out)
    return new, new.vaxon


def steady_state_gates(v: float) -> tuple[float, float, float]:
    """HH m/h/n steady-state values at a fixed voltage."""
    x = v + 40.0
    a_m = 1.0 if abs(x) < 1e-7 else 0.1 * x / (1.0 - math.exp(-x / 10.0))
    b_m = 4.0 * math.exp(-(v + 65.0) / 18.0)
    a_h = 0.07 * math.exp(-(v + 65.0) / 20.0)
    b_h = 1.0 / (1.0 + math.exp(-(v + 35.0) / 10.0))
    y = v + 55.0
    a_n = 0.1 if abs(y) < 1e-7 else 0.01 * y / (1.0 - math.exp(-y / 10.0))
    b_n = 0.125 * math.exp(-(v + 65.0) / 80.0)
    return (a_m / (a_m + b_m), a_h / (a_h + b_h), a_n / (a_n + b_n))


def default_initial_state(v: float = -65.0) -> NeuronState:
    """All compartments at v with gates at their steady state."""
    g = steady_state_gates(v)
    return NeuronState(vdend=v, vsoma=v, vaxon=v, gates=g * 3)


def resting_state(cond: ConductanceSet = DEFAULT_CONDUCTANCES,
                  dt: float = DEFAULT_DT_MS,
                  tol: float = 1e-13,
                  max_steps: int = 2_000_000) -> NeuronState:
    """Locate the zero-input fixed point by iterating cell_update until
    the state stops moving (max-abs change <= tol)."""
    s = default_initial_state()
    prev = s.to_array()
    for _ in range(max_steps):
        s, _ = cell_update(s, cond, 0.0, 0.0, dt)
        cur = s.to_array()
        if np.abs(cur - prev).max() <= tol:
            return s
        prev = cur
    raise NumericDomainError("no fixed point found within max_steps")
