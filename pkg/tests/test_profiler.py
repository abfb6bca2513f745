import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brainframe.errors import NumericDomainError
from brainframe.model import UseCase
from brainframe.profiler import (
    DfeTickModel,
    compute_memory_ratio,
    connection_count,
    estimate_dfe_step_seconds,
    estimate_dfe_ticks,
    flop_count,
    memory_accesses,
    profile,
)


def oracle_counts(use_case, n, c):
    """Independent per-neuron summation of the profile line items:
    859 FP ops per cell, 12 (RGJ) / 4 (SGJ) per connection, and
    41 + row connections accesses per neuron."""
    total_conns = int(math.floor(n * n * c + 0.5)) if use_case is not UseCase.NGJ else 0
    base, rem = divmod(total_conns, n)
    per_neuron = np.full(n, base, dtype=np.int64)
    per_neuron[:rem] += 1
    per_conn = {UseCase.RGJ: 12, UseCase.SGJ: 4, UseCase.NGJ: 0}[use_case]
    flops = int(np.sum(859 + per_conn * per_neuron))
    mem = int(np.sum(41 + per_neuron))
    return flops, mem


class TestFlopCount:
    def test_rgj_96_dense(self):
        assert flop_count(UseCase.RGJ, 96, 1.0) == 193_056

    def test_gj_fraction_matches_published_57_percent(self):
        p = profile(UseCase.RGJ, 96, 1.0)
        assert p.gj_fraction == pytest.approx(0.573, abs=0.01)

    def test_ngj_linear(self):
        assert flop_count(UseCase.NGJ, 1000) == 859_000
        assert flop_count(UseCase.NGJ, 2000) == 2 * flop_count(UseCase.NGJ, 1000)

    def test_sgj_hand_value(self):
        assert flop_count(UseCase.SGJ, 960, 0.5) == 2_667_840

    def test_density_domain(self):
        with pytest.raises(NumericDomainError):
            flop_count(UseCase.RGJ, 100, 1.5)
        with pytest.raises(NumericDomainError):
            memory_accesses(UseCase.SGJ, 100, -0.1)

    @given(st.sampled_from(list(UseCase)), st.integers(1, 7680),
           st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_matches_loop_oracle(self, case, n, c):
        oflops, omem = oracle_counts(case, n, c)
        assert flop_count(case, n, c) == oflops
        assert memory_accesses(case, n, c) == omem

    @given(st.integers(1, 7680), st.floats(0, 1))
    @settings(max_examples=100, deadline=None)
    def test_case_ordering(self, n, c):
        assert (flop_count(UseCase.RGJ, n, c)
                >= flop_count(UseCase.SGJ, n, c)
                >= flop_count(UseCase.NGJ, n))

    def test_gj_fraction_vanishes_at_zero_density(self):
        assert profile(UseCase.RGJ, 500, 0.0).gj_fraction == 0.0


class TestMemoryAccesses:
    def test_rgj_96_dense(self):
        assert memory_accesses(UseCase.RGJ, 96, 1.0) == 13_152

    def test_ngj(self):
        for n in (1, 96, 7680):
            assert memory_accesses(UseCase.NGJ, n) == 41 * n

    def test_sgj_zero_density_equals_ngj(self):
        assert memory_accesses(UseCase.SGJ, 100, 0.0) == 4_100


class TestRatio:
    def test_ngj_constant(self):
        for n in (1, 96, 960, 7680):
            assert compute_memory_ratio(UseCase.NGJ, n) == pytest.approx(859 / 41)

    def test_rgj_96_dense(self):
        assert compute_memory_ratio(UseCase.RGJ, 96, 1.0) == pytest.approx(
            193_056 / 13_152)

    @pytest.mark.parametrize("case,asymptote", [(UseCase.RGJ, 12.0),
                                                (UseCase.SGJ, 4.0)])
    @pytest.mark.parametrize("c", [0.25, 0.5, 1.0])
    def test_monotone_toward_per_connection_asymptote(self, case, c, asymptote):
        # (859 + k*n*C)/(41 + n*C) moves monotonically from 859/41 toward
        # the per-connection constant k as n grows; with k < 859/41 the
        # ratio strictly decreases and stays above k
        grid = np.linspace(96, 7680, 50, dtype=int)
        ratios = [compute_memory_ratio(case, int(n), c) for n in grid]
        assert all(b < a for a, b in zip(ratios, ratios[1:]))
        assert all(r > asymptote for r in ratios)
        assert all(r < 859 / 41 for r in ratios)


class TestDfeTicks:
    def test_hand_value(self):
        model = DfeTickModel(unroll_factor=8, pipeline_depth=100)
        assert estimate_dfe_ticks(UseCase.RGJ, 96, 1.0, model) == 1_252

    def test_density_independent(self):
        model = DfeTickModel()
        for n in (96, 480, 960):
            assert (estimate_dfe_ticks(UseCase.RGJ, n, 0.25, model)
                    == estimate_dfe_ticks(UseCase.RGJ, n, 1.0, model))

    def test_ngj(self):
        model = DfeTickModel(pipeline_depth=100)
        assert estimate_dfe_ticks(UseCase.NGJ, 7680, model=model) == 7_780

    def test_step_seconds(self):
        model = DfeTickModel(unroll_factor=8, pipeline_depth=100, clock_hz=1e8)
        assert estimate_dfe_step_seconds(UseCase.RGJ, 96, 1.0, model) == 1_252 / 1e8

    def test_invalid_model(self):
        with pytest.raises(NumericDomainError):
            DfeTickModel(unroll_factor=0)
        with pytest.raises(NumericDomainError):
            DfeTickModel(pipeline_depth=-1)


class TestConnectionCount:
    def test_rounds_to_nearest(self):
        assert connection_count(3, 0.5) == 5  # 4.5 rounds up
        assert connection_count(10, 0.333) == 33
        assert connection_count(96, 1.0) == 9216
