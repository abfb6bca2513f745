"""Analytic workload characterization.

Per-step FLOP and memory-access models use the published profile
constants (859 FP ops per cell, 12/4 per RGJ/SGJ connection, 19-value
state + 1 evoked input + 20 conductances + 1 axon output + one
connectivity-vector access per connection), independent of the engine's
actual micro-op counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericDomainError
from .model import UseCase

CELL_FLOPS = 859
GJ_FLOPS = {UseCase.RGJ: 12, UseCase.SGJ: 4, UseCase.NGJ: 0}
# per-neuron accesses: 19 states + 1 evoked + 20 conductances + 1 axon out
BASE_ACCESSES = 41


def _check_density(c: float) -> None:
    if not 0.0 <= c <= 1.0:
        raise NumericDomainError(f"density must be in [0, 1], got {c}")


def connection_count(n: int, c: float) -> int:
    """Total connections N^2*C, rounded to nearest (ties up)."""
    _check_density(c)
    return int(math.floor(n * n * c + 0.5))


def flop_count(use_case: UseCase, n: int, c: float = 0.0) -> int:
    """Per-step FP operations: 859*N plus 12 (RGJ) or 4 (SGJ) per
    connection. NGJ ignores density."""
    if use_case is UseCase.NGJ:
        return CELL_FLOPS * n
    _check_density(c)
    return CELL_FLOPS * n + GJ_FLOPS[use_case] * connection_count(n, c)


def gj_flop_count(use_case: UseCase, n: int, c: float = 0.0) -> int:
    if use_case is UseCase.NGJ:
        return 0
    return GJ_FLOPS[use_case] * connection_count(n, c)


def memory_accesses(use_case: UseCase, n: int, c: float = 0.0) -> int:
    """Per-step single-FP memory accesses: N*(41 + N*C), with the
    connectivity-row term dropped for NGJ."""
    if use_case is UseCase.NGJ:
        return BASE_ACCESSES * n
    _check_density(c)
    return BASE_ACCESSES * n + connection_count(n, c)


def compute_memory_ratio(use_case: UseCase, n: int, c: float = 0.0) -> float:
    return flop_count(use_case, n, c) / memory_accesses(use_case, n, c)


@dataclass(frozen=True)
class WorkloadProfile:
    flops_per_step: int
    mem_accesses_per_step: int
    ratio: float
    gj_fraction: float

    def to_dict(self) -> dict:
        return {
            "flops_per_step": self.flops_per_step,
            "mem_accesses_per_step": self.mem_accesses_per_step,
            "ratio": self.ratio,
            "gj_fraction": self.gj_fraction,
        }


def profile(use_case: UseCase, n: int, c: float = 0.0) -> WorkloadProfile:
    flops = flop_count(use_case, n, c)
    mem = memory_accesses(use_case, n, c)
    gj = gj_flop_count(use_case, n, c)
    return WorkloadProfile(
        flops_per_step=flops,
        mem_accesses_per_step=mem,
        ratio=flops / mem,
        gj_fraction=gj / flops if flops else 0.0,
    )


@dataclass(frozen=True)
class DfeTickModel:
    """Analytic dataflow-pipeline model: the GJ loop costs ceil(n/U)
    ticks per neuron regardless of density (connection slots are spent
    whether or not a connection exists); D pipeline-fill ticks per step."""

    unroll_factor: int = 8
    pipeline_depth: int = 100
    clock_hz: float = 100e6

    def __post_init__(self):
        if self.unroll_factor < 1:
            raise NumericDomainError("unroll_factor must be >= 1")
        if self.pipeline_depth < 0:
            raise NumericDomainError("pipeline_depth must be >= 0")
        if self.clock_hz <= 0:
            raise NumericDomainError("clock_hz must be > 0")


def estimate_dfe_ticks(use_case: UseCase, n: int, c: float = 0.0,
                       model: DfeTickModel = DfeTickModel()) -> int:
    """Ticks per simulation step. RGJ/SGJ pay the full connection sweep
    independent of density; NGJ streams one neuron per tick."""
    if use_case is UseCase.NGJ:
        return n + model.pipeline_depth
    _check_density(c)
    return n * math.ceil(n / model.unroll_factor) + model.pipeline_depth


def estimate_dfe_step_seconds(use_case: UseCase, n: int, c: float = 0.0,
                              model: DfeTickModel = DfeTickModel()) -> float:
    return estimate_dfe_ticks(use_case, n, c, model) / model.clock_hz
