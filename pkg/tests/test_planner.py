import numpy as np
import pytest

from brainframe.errors import CoverageError, NumericDomainError
from brainframe.model import UseCase
from brainframe.planner import (
    BatchItem,
    ExperimentBatch,
    energy_joules,
    plan,
)
from brainframe.selector import Calibration, ExperimentSpec, Fabric


def two_experiment_setup():
    """Calibration reproducing {F1: [10 s, 20 s], F2: [15 s, 5 s]} for a
    pair of one-second experiments (20,000 steps each)."""
    steps = 20_000
    e1 = BatchItem(ExperimentSpec(UseCase.NGJ, 96), brain_seconds=1.0)
    e2 = BatchItem(ExperimentSpec(UseCase.NGJ, 960), brain_seconds=1.0)
    assert e1.steps == steps
    entries = [
        (Fabric.DFE, UseCase.NGJ, 0.0, 96, 10.0 / steps),
        (Fabric.DFE, UseCase.NGJ, 0.0, 960, 20.0 / steps),
        (Fabric.GPU, UseCase.NGJ, 0.0, 96, 15.0 / steps),
        (Fabric.GPU, UseCase.NGJ, 0.0, 960, 5.0 / steps),
    ]
    return ExperimentBatch((e1, e2)), Calibration(entries)


class TestBatch:
    def test_brain_seconds_to_steps(self):
        item = BatchItem(ExperimentSpec(UseCase.RGJ, 384, 1.0), brain_seconds=40.0)
        assert item.steps == 800_000

    def test_empty_batch_rejected(self):
        with pytest.raises(NumericDomainError):
            ExperimentBatch(())

    def test_unclassifiable_spec_rejected(self):
        from brainframe.errors import UnsupportedSizeError
        with pytest.raises(UnsupportedSizeError):
            ExperimentBatch((BatchItem(ExperimentSpec(UseCase.NGJ, 10), 1.0),))


class TestPlan:
    def test_synthetic_two_experiment_savings(self):
        batch, cal = two_experiment_setup()
        report = plan(batch, cal)
        assert report.total_seconds == pytest.approx(15.0)
        dfe = report.savings_vs[Fabric.DFE]
        gpu = report.savings_vs[Fabric.GPU]
        assert dfe[0] == pytest.approx(30.0)
        assert dfe[2] == pytest.approx(0.50)
        assert gpu[0] == pytest.approx(20.0)
        assert gpu[2] == pytest.approx(0.25)

    def test_savings_zero_when_one_fabric_wins_everything(self):
        steps = 20_000
        batch = ExperimentBatch((
            BatchItem(ExperimentSpec(UseCase.NGJ, 96), 1.0),
            BatchItem(ExperimentSpec(UseCase.NGJ, 960), 1.0),
        ))
        entries = []
        for n in (96, 960):
            entries.append((Fabric.DFE, UseCase.NGJ, 0.0, n, 1.0 / steps))
            entries.append((Fabric.GPU, UseCase.NGJ, 0.0, n, 2.0 / steps))
        report = plan(batch, Calibration(entries))
        assert report.savings_vs[Fabric.DFE][2] == pytest.approx(0.0)
        assert all(a.decision.fabric is Fabric.DFE for a in report.assignments)

    def test_missing_coverage_raises(self):
        batch = ExperimentBatch((BatchItem(ExperimentSpec(UseCase.SGJ, 96, 1.0), 1.0),))
        with pytest.raises(CoverageError):
            plan(batch, Calibration([(Fabric.DFE, UseCase.NGJ, 0.0, 96, 1e-3)]))

    def test_rule_fallback_assigns_without_predictions(self):
        batch = ExperimentBatch((BatchItem(ExperimentSpec(UseCase.SGJ, 96, 1.0), 1.0),))
        report = plan(batch, None, allow_rule_fallback=True)
        assert report.assignments[0].decision.fabric is Fabric.DFE
        assert report.assignments[0].predicted_seconds is None
        assert report.total_seconds is None

    def test_heterogeneous_never_worse_random(self):
        rng = np.random.default_rng(42)
        sizes = (96, 384, 960, 3840, 7680)
        batch = ExperimentBatch(tuple(
            BatchItem(ExperimentSpec(UseCase.RGJ, n, 1.0), 2.0) for n in sizes))
        for _ in range(100):
            entries = [(f, UseCase.RGJ, 1.0, n, float(rng.uniform(1e-6, 1e-3)))
                       for f in Fabric for n in sizes]
            report = plan(batch, Calibration(entries))
            for scenario, saved, pct in report.savings_vs.values():
                assert report.total_seconds <= scenario + 1e-12
                assert saved >= -1e-12 and pct >= -1e-12

    def test_savings_percent_invariant_under_time_scaling(self):
        batch, _ = two_experiment_setup()
        steps = 20_000
        base = [
            (Fabric.DFE, UseCase.NGJ, 0.0, 96, 10.0 / steps),
            (Fabric.DFE, UseCase.NGJ, 0.0, 960, 20.0 / steps),
            (Fabric.GPU, UseCase.NGJ, 0.0, 96, 15.0 / steps),
            (Fabric.GPU, UseCase.NGJ, 0.0, 960, 5.0 / steps),
        ]
        r1 = plan(batch, Calibration(base))
        r2 = plan(batch, Calibration([(f, u, d, n, 7.5 * s)
                                      for f, u, d, n, s in base]))
        for fabric in (Fabric.DFE, Fabric.GPU):
            assert r1.savings_vs[fabric][2] == pytest.approx(r2.savings_vs[fabric][2])


class TestEnergy:
    def test_tdp_arithmetic(self):
        assert energy_joules(Fabric.DFE, 60.0) == 8_400.0
        assert energy_joules(Fabric.GPU, 60.0) == 15_000.0
        assert energy_joules(Fabric.PHI, 0.0) == 0.0

    def test_plan_energy_uses_tdp_times_seconds(self):
        batch, cal = two_experiment_setup()
        report = plan(batch, cal)
        # best: e1 on DFE (10 s), e2 on GPU (5 s)
        assert report.total_joules == pytest.approx(140 * 10 + 250 * 5)
        dfe_scenario = report.energy_vs[Fabric.DFE]
        assert dfe_scenario[0] == pytest.approx(140 * 30)

    def test_energy_ordering_can_differ_from_time_ordering(self):
        # GPU-only is slower than the heterogeneous plan but its lower-TDP
        # competitor scenario can still burn less energy than the plan
        steps = 20_000
        batch = ExperimentBatch((BatchItem(ExperimentSpec(UseCase.NGJ, 96), 1.0),))
        entries = [
            (Fabric.GPU, UseCase.NGJ, 0.0, 96, 10.0 / steps),   # fast, high TDP
            (Fabric.DFE, UseCase.NGJ, 0.0, 96, 16.0 / steps),   # slow, low TDP
        ]
        report = plan(batch, Calibration(entries))
        assert report.assignments[0].decision.fabric is Fabric.GPU
        t_saved_vs_dfe = report.savings_vs[Fabric.DFE][1]
        e_saved_vs_dfe = report.energy_vs[Fabric.DFE][1]
        assert t_saved_vs_dfe > 0           # time favors the chosen GPU
        assert e_saved_vs_dfe < 0           # energy would favor the DFE
