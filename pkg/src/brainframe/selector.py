"""Accelerator selection: experiment classification, the default
rule table distilled from the published performance crossovers, optional
measured-calibration override (argmin of interpolated seconds-per-step),
and real-time-achievable network sizes."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from enum import Enum

from .errors import CoverageError, NumericDomainError, UnsupportedSizeError
from .model import UseCase

MIN_NETWORK = 96
MAX_NETWORK = 7680          # DFE fabric cap
TYPE_I_MAX = 960            # boundary n=960 classifies as TYPE_I
REAL_TIME_SEC_PER_STEP = 50e-6

DENSITY_BUCKETS = (0.0, 0.25, 0.50, 0.75, 1.0)


class Fabric(Enum):
    DFE = "DFE"
    PHI = "PHI"
    GPU = "GPU"

    @property
    def tdp_watts(self) -> float:
        return {Fabric.DFE: 140.0, Fabric.PHI: 225.0, Fabric.GPU: 250.0}[self]


class Scale(Enum):
    TYPE_I = "TYPE_I"
    TYPE_II = "TYPE_II"


@dataclass(frozen=True)
class ExperimentSpec:
    """User-facing experiment description."""

    use_case: UseCase
    n: int
    density: float = 0.0
    real_time: bool = False

    def __post_init__(self):
        if not 0.0 <= self.density <= 1.0:
            raise NumericDomainError(f"density must be in [0, 1], got {self.density}")


@dataclass(frozen=True)
class ExperimentClass:
    scale: Scale
    use_case: UseCase
    n: int
    density: float
    real_time: bool


@dataclass(frozen=True)
class SelectionDecision:
    fabric: Fabric
    reason: str
    predicted_sec_per_step: float | None = None

    def to_dict(self) -> dict:
        return {
            "fabric": self.fabric.value,
            "reason": self.reason,
            "predicted_sec_per_step": self.predicted_sec_per_step,
        }


def bucket_density(c: float) -> float:
    """Snap a density to the nearest of {0, 25, 50, 75, 100}%."""
    return min(DENSITY_BUCKETS, key=lambda b: abs(b - c))


def classify(spec: ExperimentSpec) -> ExperimentClass:
    if not MIN_NETWORK <= spec.n <= MAX_NETWORK:
        raise UnsupportedSizeError(
            f"network size {spec.n} outside supported range "
            f"[{MIN_NETWORK}, {MAX_NETWORK}] (DFE fabric caps at {MAX_NETWORK} cells)")
    scale = Scale.TYPE_I if spec.n <= TYPE_I_MAX else Scale.TYPE_II
    return ExperimentClass(scale=scale, use_case=spec.use_case, n=spec.n,
                           density=spec.density, real_time=spec.real_time)


class Calibration:
    """Measured seconds-per-step keyed by (fabric, use_case, density
    bucket), piecewise-linear in n (clamped at the grid ends)."""

    def __init__(self, entries):
        # entries: iterable of (Fabric, UseCase, density, n, sec_per_step)
        self._grid: dict[tuple[Fabric, UseCase, float], list[tuple[int, float]]] = {}
        for fabric, use_case, density, n, sec in entries:
            if sec <= 0:
                raise NumericDomainError(f"sec_per_step must be > 0, got {sec}")
            key = (fabric, use_case, bucket_density(density))
            self._grid.setdefault(key, []).append((int(n), float(sec)))
        for pts in self._grid.values():
            pts.sort()

    def covers(self, fabric: Fabric, use_case: UseCase, density: float) -> bool:
        return (fabric, use_case, bucket_density(density)) in self._grid

    def grid_points(self, fabric: Fabric, use_case: UseCase,
                    density: float) -> list[tuple[int, float]]:
        key = (fabric, use_case, bucket_density(density))
        if key not in self._grid:
            raise CoverageError(
                f"no calibration for ({fabric.value}, {use_case.value}, "
                f"density bucket {bucket_density(density):.2f})")
        return self._grid[key]

    def sec_per_step(self, fabric: Fabric, use_case: UseCase,
                     density: float, n: int) -> float:
        pts = self.grid_points(fabric, use_case, density)
        ns = [p[0] for p in pts]
        if n <= ns[0]:
            return pts[0][1]
        if n >= ns[-1]:
            return pts[-1][1]
        j = bisect.bisect_left(ns, n)
        if ns[j] == n:
            return pts[j][1]
        (n0, t0), (n1, t1) = pts[j - 1], pts[j]
        return t0 + (t1 - t0) * (n - n0) / (n1 - n0)


def _rule_select(cls: ExperimentClass) -> SelectionDecision:
    c = bucket_density(cls.density)
    n = cls.n
    if cls.real_time:
        return SelectionDecision(Fabric.DFE, "R1:real-time")
    if cls.use_case is UseCase.NGJ:
        return SelectionDecision(Fabric.DFE, "R2:ngj")
    if cls.use_case is UseCase.SGJ:
        if cls.scale is Scale.TYPE_I:
            fabric = Fabric.DFE if n < 480 else Fabric.GPU
            return SelectionDecision(fabric, "R3:sgj-type1")
        return SelectionDecision(Fabric.GPU, "R4:sgj-type2")
    # RGJ
    if c == 1.0:
        if cls.scale is Scale.TYPE_I:
            return SelectionDecision(Fabric.DFE, "R5:rgj-dense-type1")
        fabric = Fabric.GPU if n >= 4800 else Fabric.DFE
        return SelectionDecision(fabric, "R5:rgj-dense-type2")
    if cls.scale is Scale.TYPE_I:
        phi = ((c >= 0.75 and n >= 960)
               or (0.5 <= c < 0.75 and n >= 864)
               or (c < 0.5 and n >= 672))
        return SelectionDecision(Fabric.PHI if phi else Fabric.DFE, "R6:rgj-sparse-type1")
    gpu = (c < 0.5 and n >= 3840) or (c >= 0.5 and n >= 4800)
    return SelectionDecision(Fabric.GPU if gpu else Fabric.PHI, "R7:rgj-sparse-type2")


def select(cls: ExperimentClass,
           calibration: Calibration | None = None) -> SelectionDecision:
    """Pick a fabric. Real-time experiments always go to the DFE;
    otherwise calibration argmin when available, default rules when not."""
    if cls.real_time:
        decision = SelectionDecision(Fabric.DFE, "R1:real-time")
        if calibration is not None and calibration.covers(
                Fabric.DFE, cls.use_case, cls.density):
            t = calibration.sec_per_step(Fabric.DFE, cls.use_case, cls.density, cls.n)
            decision = SelectionDecision(Fabric.DFE, "R1:real-time", t)
        return decision
    if calibration is not None:
        best = None
        for fabric in Fabric:
            if not calibration.covers(fabric, cls.use_case, cls.density):
                continue
            t = calibration.sec_per_step(fabric, cls.use_case, cls.density, cls.n)
            if best is None or t < best[1]:
                best = (fabric, t)
        if best is not None:
            return SelectionDecision(best[0], "calibration-argmin", best[1])
    return _rule_select(cls)


# Published real-time-achievable sizes; None marks fabrics that never
# reach real time for the use case.
_RT_DEFAULTS: dict[tuple[UseCase, float], dict[Fabric, int | None]] = {
    (UseCase.RGJ, 1.00): {Fabric.DFE: 310, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.RGJ, 0.75): {Fabric.DFE: 310, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.RGJ, 0.50): {Fabric.DFE: 310, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.RGJ, 0.25): {Fabric.DFE: 310, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.SGJ, 1.00): {Fabric.DFE: 400, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.SGJ, 0.75): {Fabric.DFE: 400, Fabric.PHI: None, Fabric.GPU: None},
    (UseCase.SGJ, 0.50): {Fabric.DFE: 400, Fabric.PHI: None, Fabric.GPU: 96},
    (UseCase.SGJ, 0.25): {Fabric.DFE: 400, Fabric.PHI: None, Fabric.GPU: 96},
    (UseCase.NGJ, 0.00): {Fabric.DFE: 7680, Fabric.PHI: 96, Fabric.GPU: 500},
}


def rt_max_network(fabric: Fabric, use_case: UseCase, density: float = 0.0,
                   calibration: Calibration | None = None) -> int | None:
    """Largest network size meeting the 50 us/step real-time criterion,
    or None if no size does."""
    if calibration is not None and calibration.covers(fabric, use_case, density):
        best = None
        for n, sec in calibration.grid_points(fabric, use_case, density):
            if sec <= REAL_TIME_SEC_PER_STEP:
                best = n if best is None else max(best, n)
        return best
    if use_case is UseCase.NGJ:
        return _RT_DEFAULTS[(UseCase.NGJ, 0.0)][fabric]
    bucket = bucket_density(density)
    if bucket == 0.0:
        bucket = 0.25  # the published table starts at 25% density
    return _RT_DEFAULTS[(use_case, bucket)][fabric]
