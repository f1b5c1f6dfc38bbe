"""Compiled forward-Euler loops shared by the simulation entry points.

The damping law is selected by an integer code so one kernel serves all
three controllers. Parameters are packed as ``(m, c1, c2, c3)``:

    SFC: c1 = mu,   c2 = n
    LAC: c1 = mu_a
    NAC: c1 = mu_n, c2 = alpha_n, c3 = sigma_n
"""

import math

import numpy as np
from numba import njit

KIND_SFC = 0
KIND_LAC = 1
KIND_NAC = 2


@njit(cache=True)
def damping(kind, c1, c2, c3, v, f):
    if kind == KIND_SFC:
        if c2 == 1.0:
            return c1 * v
        if v == 0.0:
            return 0.0
        return c1 * abs(v) ** (c2 - 1.0) * v
    if kind == KIND_LAC:
        return c1 * v
    coeff = c1 + c2 * (1.0 - math.exp(-(f * f) / (c3 * c3)))
    return coeff * v


@njit(cache=True)
def simulate(kind, m, c1, c2, c3, g, f_in, dt, v0, x0, a0, m_h, b_h, coupled):
    """Run ``len(f_in) - 1`` steps; row 0 holds the initial state.

    Returns the trace columns and the index of the first non-finite step
    (-1 when the run stayed finite). Columns past a failure are left at 0.
    """
    n_rows = f_in.shape[0]
    f_ext = np.zeros(n_rows)
    f_hum = np.zeros(n_rows)
    acc = np.zeros(n_rows)
    vel = np.zeros(n_rows)
    pos = np.zeros(n_rows)
    work = np.zeros(n_rows)
    diss = np.zeros(n_rows)
    store = np.zeros(n_rows)

    vel[0] = v0
    pos[0] = x0
    acc[0] = a0
    if coupled:
        f_hum[0] = b_h * g * v0
    f_ext[0] = f_in[0] - f_hum[0]
    store[0] = 0.5 * m * v0 * v0
    p_prev = damping(kind, c1, c2, c3, v0, f_ext[0]) * v0

    for k in range(1, n_rows):
        v_prev = vel[k - 1]
        f = f_in[k]
        if coupled:
            vo_prev = g * v_prev
            if k >= 2:
                dvo = (vo_prev - g * vel[k - 2]) / dt
            else:
                dvo = 0.0
            f_hum[k] = m_h * dvo + b_h * vo_prev
            f = f - f_hum[k]
        a = (f - damping(kind, c1, c2, c3, v_prev, f)) / m
        v = v_prev + a * dt
        if not (math.isfinite(v) and math.isfinite(a)):
            return f_ext, f_hum, acc, vel, pos, work, diss, store, k
        f_ext[k] = f
        acc[k] = a
        vel[k] = v
        pos[k] = pos[k - 1] + v * dt
        work[k] = work[k - 1] + dt * f * (v + v_prev) * 0.5
        p_now = damping(kind, c1, c2, c3, v, f) * v
        diss[k] = diss[k - 1] + dt * (p_now + p_prev) * 0.5
        p_prev = p_now
        store[k] = 0.5 * m * v * v
    return f_ext, f_hum, acc, vel, pos, work, diss, store, -1


@njit(cache=True)
def sine_projection(kind, m, c1, c2, c3, amplitude, omega, dt, v0, n_steps, n_proj):
    """Drive with ``A sin(w k dt)`` for ``n_steps`` steps and project the last
    ``n_proj`` internal-velocity samples onto sin/cos at ``w``.

    Returns ``(s, c, fail)`` with ``v ~ s sin + c cos`` and ``fail`` the first
    non-finite step or -1.
    """
    v = v0
    s_acc = 0.0
    c_acc = 0.0
    start = n_steps - n_proj
    for k in range(1, n_steps + 1):
        t = k * dt
        f = amplitude * math.sin(omega * t)
        a = (f - damping(kind, c1, c2, c3, v, f)) / m
        v = v + a * dt
        if not math.isfinite(v):
            return 0.0, 0.0, k
        if k > start:
            s_acc += v * math.sin(omega * t)
            c_acc += v * math.cos(omega * t)
    return 2.0 * s_acc / n_proj, 2.0 * c_acc / n_proj, -1
