"""Batch time/energy planning: assign each experiment to a fabric,
total the predicted runtimes, and compare against homogeneous
single-fabric systems in both time and TDP-based energy."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CoverageError, NumericDomainError
from .selector import (
    Calibration,
    ExperimentSpec,
    Fabric,
    SelectionDecision,
    classify,
    select,
)

SIM_STEP_SECONDS = 50e-6  # brain time per simulation step


@dataclass(frozen=True)
class BatchItem:
    spec: ExperimentSpec
    brain_seconds: float

    def __post_init__(self):
        if self.brain_seconds < 0:
            raise NumericDomainError("brain_seconds must be >= 0")

    @property
    def steps(self) -> int:
        return round(self.brain_seconds / SIM_STEP_SECONDS)


@dataclass(frozen=True)
class ExperimentBatch:
    items: tuple[BatchItem, ...]

    def __post_init__(self):
        if not self.items:
            raise NumericDomainError("batch must not be empty")
        for item in self.items:
            classify(item.spec)  # raises if any spec is unclassifiable


@dataclass(frozen=True)
class Assignment:
    item: BatchItem
    decision: SelectionDecision
    predicted_seconds: float | None


@dataclass(frozen=True)
class PlanReport:
    assignments: tuple[Assignment, ...]
    total_seconds: float | None
    # per single-fabric scenario: (scenario total s, saved s, saved fraction)
    savings_vs: dict[Fabric, tuple[float, float, float]] = field(default_factory=dict)
    # per single-fabric scenario: (scenario J, saved J, saved fraction)
    energy_vs: dict[Fabric, tuple[float, float, float]] = field(default_factory=dict)

    @property
    def total_joules(self) -> float | None:
        if any(a.predicted_seconds is None for a in self.assignments):
            return None
        return sum(a.decision.fabric.tdp_watts * a.predicted_seconds
                   for a in self.assignments)

    def to_dict(self) -> dict:
        return {
            "experiments": [
                {
                    "use_case": a.item.spec.use_case.value,
                    "n": a.item.spec.n,
                    "density": a.item.spec.density,
                    "real_time": a.item.spec.real_time,
                    "brain_seconds": a.item.brain_seconds,
                    "steps": a.item.steps,
                    "fabric": a.decision.fabric.value,
                    "reason": a.decision.reason,
                    "predicted_seconds": a.predicted_seconds,
                }
                for a in self.assignments
            ],
            "total_seconds": self.total_seconds,
            "total_joules": self.total_joules,
            "savings_vs": {
                f.value: {"scenario_seconds": s, "saved_seconds": d, "saved_fraction": p}
                for f, (s, d, p) in self.savings_vs.items()
            },
            "energy_vs": {
                f.value: {"scenario_joules": e, "saved_joules": d, "saved_fraction": p}
                for f, (e, d, p) in self.energy_vs.items()
            },
        }

    def to_text(self) -> str:
        """Human report; times presented in minutes."""
        lines = ["experiment            fabric  reason                 minutes"]
        for a in self.assignments:
            mins = "-" if a.predicted_seconds is None else f"{a.predicted_seconds / 60:.2f}"
            s = a.item.spec
            lines.append(f"{s.use_case.value:>4} n={s.n:<6} C={s.density:<5.2f} "
                         f"{a.decision.fabric.value:<6} {a.decision.reason:<22} {mins}")
        if self.total_seconds is not None:
            lines.append(f"total: {self.total_seconds / 60:.2f} min")
        for f, (s, d, p) in self.savings_vs.items():
            lines.append(f"vs {f.value}-only: saves {d / 60:.2f} min ({100 * p:.1f}%)")
        for f, (e, d, p) in self.energy_vs.items():
            lines.append(f"vs {f.value}-only energy: saves {d / 1000:.2f} kJ ({100 * p:.1f}%)")
        return "\n".join(lines)


def energy_joules(fabric: Fabric, seconds: float) -> float:
    """Nominal (TDP) energy for running a fabric for a duration."""
    return fabric.tdp_watts * seconds


def plan(batch: ExperimentBatch,
         calibration: Calibration | None = None,
         allow_rule_fallback: bool = False) -> PlanReport:
    """Select a fabric per experiment and compute totals plus savings
    versus each single-fabric system.

    Without full calibration coverage, a missing (fabric, experiment)
    pair raises CoverageError unless allow_rule_fallback is set, in
    which case selection falls back to the rule table and uncovered
    predictions/savings are omitted.
    """
    assignments = []
    for item in batch.items:
        cls = classify(item.spec)
        decision = select(cls, calibration)
        secs = None
        if decision.predicted_sec_per_step is not None:
            secs = item.steps * decision.predicted_sec_per_step
        elif not allow_rule_fallback:
            raise CoverageError(
                f"no calibration for experiment ({item.spec.use_case.value}, "
                f"n={item.spec.n}, C={item.spec.density}) on any fabric")
        assignments.append(Assignment(item, decision, secs))

    total = None
    if all(a.predicted_seconds is not None for a in assignments):
        total = sum(a.predicted_seconds for a in assignments)

    savings_vs: dict[Fabric, tuple[float, float, float]] = {}
    energy_vs: dict[Fabric, tuple[float, float, float]] = {}
    if calibration is not None and total is not None:
        best_joules = sum(energy_joules(a.decision.fabric, a.predicted_seconds)
                          for a in assignments)
        for fabric in Fabric:
            try:
                scenario = sum(
                    item.steps * calibration.sec_per_step(
                        fabric, item.spec.use_case, item.spec.density, item.spec.n)
                    for item in batch.items)
            except CoverageError:
                # a fabric the calibration never measured has no scenario
                continue
            savings_vs[fabric] = (scenario, scenario - total,
                                  (scenario - total) / scenario if scenario else 0.0)
            sc_joules = energy_joules(fabric, scenario)
            energy_vs[fabric] = (sc_joules, sc_joules - best_joules,
                                 (sc_joules - best_joules) / sc_joules if sc_joules else 0.0)
    return PlanReport(assignments=tuple(assignments), total_seconds=total,
                      savings_vs=savings_vs, energy_vs=energy_vs)
