import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brainframe.errors import InputShapeError, NumericDomainError
from brainframe.model import (
    CONDUCTANCE_COUNT,
    DEFAULT_CONDUCTANCES,
    STATE_SIZE,
    ConductanceSet,
    ConnectivityMatrix,
    EvokedInputSchedule,
    NeuronState,
    Pulse,
    cell_update,
    default_initial_state,
    gj_current_realistic,
    gj_current_simplified,
    resting_state,
)


def rgj_term(prev, neigh, w):
    # independent hand evaluation of one realistic GJ term
    v = prev - neigh
    f = 0.8 * v * math.exp(-1.0 * v * v / 100.0) + 0.2
    return w * f * v


class TestRealisticGJ:
    def test_zero_difference_is_zero(self):
        assert gj_current_realistic(-60.0, [-60.0, -60.0], [1.0, 1.0]) == 0.0

    def test_single_neighbor_hand_value(self):
        # V = -10, f = 0.8*(-10)*e^(-1) + 0.2, Ic = f*V
        expected = rgj_term(-60.0, -50.0, 1.0)
        got = gj_current_realistic(-60.0, [-50.0], [1.0])
        assert got == expected
        assert got == pytest.approx(27.430355293715387, abs=1e-12)

    def test_zero_weights(self):
        assert gj_current_realistic(-20.0, [3.0, -90.0, 41.0], [0.0, 0.0, 0.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(InputShapeError):
            gj_current_realistic(-60.0, [-50.0, -40.0], [1.0])

    @given(st.lists(st.floats(-100, 60), min_size=1, max_size=8),
           st.floats(-100, 60))
    def test_identical_network_state_property(self, weights, v):
        # all differences zero -> f(0)*0 terms -> exactly zero
        assert gj_current_realistic(v, [v] * len(weights), weights) == 0.0

    @given(st.floats(-90, -20), st.lists(st.floats(-90, -20), min_size=2, max_size=6),
           st.data())
    def test_removing_connection_removes_its_term(self, prev, neighs, data):
        weights = [data.draw(st.floats(0.01, 2.0)) for _ in neighs]
        j = data.draw(st.integers(0, len(neighs) - 1))
        full = gj_current_realistic(prev, neighs, weights)
        pruned_w = list(weights)
        pruned_w[j] = 0.0
        pruned = gj_current_realistic(prev, neighs, pruned_w)
        term = rgj_term(prev, neighs[j], weights[j])
        assert full - pruned == pytest.approx(term, rel=1e-9, abs=1e-9)


class TestSimplifiedGJ:
    def test_zero_difference(self):
        assert gj_current_simplified(-60.0, [-60.0], [5.0]) == 0.0

    def test_symmetric_differences_cancel(self):
        assert gj_current_simplified(-60.0, [-50.0, -70.0], [1.0, 1.0]) == 0.0

    def test_hand_value(self):
        assert gj_current_simplified(-60.0, [-50.0], [0.5]) == 5.0

    def test_length_mismatch(self):
        with pytest.raises(InputShapeError):
            gj_current_simplified(-60.0, [], [1.0])


class TestNeuronState:
    def test_stores_19_scalars(self):
        s = default_initial_state()
        assert s.to_array().shape == (STATE_SIZE,)
        assert STATE_SIZE == 19

    def test_reserved_always_zero(self):
        with pytest.raises(NumericDomainError):
            NeuronState(vdend=-65, vsoma=-65, vaxon=-65,
                        gates=(0.5,) * 9, reserved=(0.1,) + (0.0,) * 6)

    def test_gate_bounds_enforced(self):
        with pytest.raises(NumericDomainError):
            NeuronState(vdend=-65, vsoma=-65, vaxon=-65, gates=(1.5,) + (0.5,) * 8)

    def test_round_trip(self):
        s = default_initial_state(-70.0)
        assert NeuronState.from_array(s.to_array()) == s


class TestConductanceSet:
    def test_count_is_20(self):
        assert DEFAULT_CONDUCTANCES.to_array().shape == (CONDUCTANCE_COUNT,)
        assert CONDUCTANCE_COUNT == 20

    def test_negative_conductance_rejected(self):
        with pytest.raises(NumericDomainError):
            ConductanceSet(g_na_dend=-1.0)
        with pytest.raises(NumericDomainError):
            ConductanceSet(c_m_soma=-0.5)


class TestConnectivityMatrix:
    def test_all_to_all_density(self):
        m = ConnectivityMatrix.all_to_all(5)
        assert m.density == 1.0

    def test_density_counts_diagonal(self):
        w = np.zeros((4, 4))
        np.fill_diagonal(w, 1.0)
        m = ConnectivityMatrix.from_weights(w)
        assert m.density == pytest.approx(4 / 16)

    def test_negative_weight_rejected(self):
        with pytest.raises(NumericDomainError):
            ConnectivityMatrix.from_weights(np.array([[0.0, -1.0], [0.0, 0.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(InputShapeError):
            ConnectivityMatrix.from_weights(np.zeros((2, 3)))


class TestEvokedInputSchedule:
    def test_pulse_window_and_target(self):
        sched = EvokedInputSchedule((
            Pulse(10, 20, 6.0),
            Pulse(15, 15, 1.0, target=frozenset({2})),
        ))
        assert list(sched.currents_at(9, 3)) == [0.0, 0.0, 0.0]
        assert list(sched.currents_at(12, 3)) == [6.0, 6.0, 6.0]
        assert list(sched.currents_at(15, 3)) == [6.0, 6.0, 7.0]
        assert list(sched.currents_at(21, 3)) == [0.0, 0.0, 0.0]

    def test_invalid_pulse(self):
        with pytest.raises(NumericDomainError):
            Pulse(5, 4, 1.0)
        with pytest.raises(NumericDomainError):
            Pulse(0, 1, float("nan"))


class TestCellUpdate:
    def test_zero_conductance_voltages_frozen(self):
        cond = ConductanceSet(
            g_na_dend=0, g_k_dend=0, g_leak_dend=0,
            g_na_soma=0, g_k_soma=0, g_leak_soma=0,
            g_na_axon=0, g_k_axon=0, g_leak_axon=0,
            g_dend_soma=0, g_soma_axon=0)
        s = NeuronState(vdend=-40.0, vsoma=-55.0, vaxon=-70.0, gates=(0.5,) * 9)
        out, va = cell_update(s, cond)
        assert (out.vdend, out.vsoma, out.vaxon) == (-40.0, -55.0, -70.0)
        assert va == -70.0
        # gates still relax per their rate functions
        assert out.gates != s.gates

    def test_dt_zero_is_identity(self):
        s = default_initial_state(-58.0)
        out, _ = cell_update(s, dt=0.0)
        assert out == s

    def test_fixed_point(self):
        rest = resting_state()
        out, _ = cell_update(rest)
        assert np.abs(out.to_array() - rest.to_array()).max() <= 1e-9

    def test_non_finite_rejected(self):
        s = default_initial_state()
        with pytest.raises(NumericDomainError):
            cell_update(s, i_gj=float("inf"))
        bad = NeuronState(vdend=float("nan"), vsoma=-65, vaxon=-65,
                          gates=(0.5,) * 9)
        with pytest.raises(NumericDomainError):
            cell_update(bad)

    def test_determinism(self):
        s = default_initial_state(-63.0)
        a, _ = cell_update(s, i_gj=1.5, i_evoked=0.3)
        b, _ = cell_update(s, i_gj=1.5, i_evoked=0.3)
        assert a == b

    def test_voltage_increment_is_euler(self):
        # dendrite increment must equal dt * (total current) / Cm exactly
        s = default_initial_state(-60.0)
        cond = DEFAULT_CONDUCTANCES
        i_gj, i_ev, dt = 0.7, 1.1, 0.05
        out, _ = cell_update(s, cond, i_gj, i_ev, dt)
        m, h, n = s.gates[0:3]
        v = s.vdend
        i_ion = (cond.g_na_dend * m ** 3 * h * (v - cond.e_na)
                 + cond.g_k_dend * n ** 4 * (v - cond.e_k)
                 + cond.g_leak_dend * (v - cond.e_leak_dend))
        i_cpl = cond.g_dend_soma * (s.vsoma - v)
        expected = v + dt * (i_gj + i_ev + i_cpl - i_ion) / cond.c_m_dend
        assert out.vdend == pytest.approx(expected, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(st.floats(-120, 60), st.floats(-120, 60), st.floats(-120, 60),
           st.lists(st.floats(0, 1), min_size=9, max_size=9),
           st.floats(-50, 50))
    def test_gates_stay_bounded(self, vd, vs, va, gates, i_gj):
        s = NeuronState(vdend=vd, vsoma=vs, vaxon=va, gates=tuple(gates))
        out, _ = cell_update(s, i_gj=i_gj)
        assert all(0.0 <= g <= 1.0 for g in out.gates)
        assert all(r == 0.0 for r in out.reserved)
