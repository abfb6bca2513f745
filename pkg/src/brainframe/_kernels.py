"""Numba-compiled numerical kernels.

State row layout (19 doubles per neuron):
    [0] vdend  [1] vsoma  [2] vaxon
    [3:6]  dendrite gates m, h, n
    [6:9]  soma gates m, h, n
    [9:12] axon gates m, h, n
    [12:19] reserved, always 0.0

Conductance layout (20 doubles, see model.ConductanceSet):
    [0:3] dendrite g_na, g_k, g_leak     [3:6] soma     [6:9] axon
    [9] e_na  [10] e_k  [11:14] e_leak per compartment
    [14:17] c_m per compartment
    [17] g_dend_soma  [18] g_soma_axon  [19] rate_scale

Gates are advanced by exact relaxation toward their steady state
(unconditionally bounded in [0,1]); voltages use forward Euler.
All accumulations run in ascending index order so results are
bitwise-reproducible regardless of how neurons are partitioned
across workers.
"""

import numpy as np
from numba import njit

# use-case codes shared with the engine
NGJ_CODE = 0
RGJ_CODE = 1
SGJ_CODE = 2


@njit(cache=True, nogil=True)
def cell_update_kernel(state, cond, i_gj, i_evoked, dt, out):
    """One forward-Euler step of a single three-compartment cell.

    i_gj and i_evoked are inward dendritic currents (uA/cm^2,
    positive depolarizes). Writes the 19-value successor into out.
    """
    vd = state[0]
    vs = state[1]
    va = state[2]
    e_na = cond[9]
    e_k = cond[10]
    g_ds = cond[17]
    g_sa = cond[18]
    rate_scale = cond[19]
    for k in range(3):
        if k == 0:
            v = vd
            i_ext = i_gj + i_evoked
            i_cpl = g_ds * (vs - vd)
        elif k == 1:
            v = vs
            i_ext = 0.0
            i_cpl = g_ds * (vd - vs) + g_sa * (va - vs)
        else:
            v = va
            i_ext = 0.0
            i_cpl = g_sa * (vs - va)
        g_na = cond[3 * k]
        g_k = cond[3 * k + 1]
        g_l = cond[3 * k + 2]
        e_l = cond[11 + k]
        c_m = cond[14 + k]
        m = state[3 + 3 * k]
        h = state[4 + 3 * k]
        n = state[5 + 3 * k]
        i_ion = (
            g_na * m * m * m * h * (v - e_na)
            + g_k * n * n * n * n * (v - e_k)
            + g_l * (v - e_l)
        )
        out[k] = v + dt * (i_ext + i_cpl - i_ion) / c_m

        # 1952 HH rate functions (1/ms); removable singularities handled
        x = v + 40.0
        if abs(x) < 1e-7:
            a_m = 1.0
        else:
            a_m = 0.1 * x / (1.0 - np.exp(-x / 10.0))
        b_m = 4.0 * np.exp(-(v + 65.0) / 18.0)
        a_h = 0.07 * np.exp(-(v + 65.0) / 20.0)
        b_h = 1.0 / (1.0 + np.exp(-(v + 35.0) / 10.0))
        y = v + 55.0
        if abs(y) < 1e-7:
            a_n = 0.1
        else:
            a_n = 0.01 * y / (1.0 - np.exp(-y / 10.0))
        b_n = 0.125 * np.exp(-(v + 65.0) / 80.0)

        for j in range(3):
            if j == 0:
                a = a_m
                b = b_m
                g = m
            elif j == 1:
                a = a_h
                b = b_h
                g = h
            else:
                a = a_n
                b = b_n
                g = n
            g_inf = a / (a + b)
            rate = rate_scale * (a + b)
            out[3 + 3 * k + j] = g_inf + (g - g_inf) * np.exp(-dt * rate)
    for j in range(12, 19):
        out[j] = 0.0


@njit(cache=True, nogil=True)
def gj_realistic_row(vdend, weights_row, i):
    """RGJ current of neuron i per Algorithm-1 semantics, index order."""
    acc = 0.0
    for j in range(vdend.shape[0]):
        w = weights_row[j]
        if w != 0.0:
            v = vdend[i] - vdend[j]
            f = 0.8 * v * np.exp(-1.0 * v * v / 100.0) + 0.2
            acc = acc + w * f * v
    return acc


@njit(cache=True, nogil=True)
def gj_simplified_row(vdend, weights_row, i):
    """SGJ weighted voltage-difference accumulation, index order."""
    acc = 0.0
    for j in range(vdend.shape[0]):
        w = weights_row[j]
        if w != 0.0:
            acc = acc + w * (vdend[j] - vdend[i])
    return acc


@njit(cache=True, nogil=True)
def compute_range(cur, nxt, weights, case, i_evoked, dt, cond, lo, hi):
    """Update neurons [lo, hi) from the read buffer into the write buffer.

    The realistic kernel accumulates outward current (Vi - Vj form), so
    it enters the dendrite with a minus sign; the simplified kernel is
    already inward-positive.
    """
    vdend = cur[:, 0]
    for i in range(lo, hi):
        if case == RGJ_CODE:
            i_gj = -gj_realistic_row(vdend, weights[i], i)
        elif case == SGJ_CODE:
            i_gj = gj_simplified_row(vdend, weights[i], i)
        else:
            i_gj = 0.0
        cell_update_kernel(cur[i], cond, i_gj, i_evoked[i], dt, nxt[i])
