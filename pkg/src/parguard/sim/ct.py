"""Saturable current-transformer measurement model.

The ratio-scaled primary current feeds a two-slope magnetizing branch in
parallel with a resistive burden; the secondary (burden) current is what
the relay sees.  Heavy through current drives the core past the knee and
the secondary collapses, which is the mechanism behind spurious
differential current on external faults.
"""

from __future__ import annotations

import numpy as np

from .network import CTParams


def _magnetizing(lam, p: CTParams):
    la = abs(lam)
    if la <= p.knee_wb:
        return lam / p.l_unsat_h
    sign = 1.0 if lam >= 0 else -1.0
    return sign * (p.knee_wb / p.l_unsat_h + (la - p.knee_wb) / p.l_sat_h)


def apply_ct(i_primary: np.ndarray, p: CTParams, h: float,
             lam0: float = 0.0) -> np.ndarray:
    """Primary-referred secondary current of the CT for a sampled primary
    waveform (trapezoidal integration of the burden/magnetizing loop)."""
    i_primary = np.asarray(i_primary, dtype=float)
    out = np.empty_like(i_primary)
    lam = lam0
    i_ratio0 = i_primary[0] / p.ratio
    i_m = _magnetizing(lam, p)
    v = p.burden_ohm * (i_ratio0 - i_m)
    out[0] = (i_ratio0 - i_m) * p.ratio
    g_u = 1.0 / p.l_unsat_h
    g_s = 1.0 / p.l_sat_h
    c_s = p.knee_wb * (g_u - g_s)  # i = g_s*lam + sign*c_s beyond the knee
    for n in range(1, len(i_primary)):
        ir = i_primary[n] / p.ratio
        base = lam + (h / 2.0) * v
        lam1 = lam  # refined below
        for _ in range(8):
            la = abs(lam1)
            if la <= p.knee_wb:
                g, c = g_u, 0.0
            else:
                g, c = g_s, (c_s if lam1 >= 0 else -c_s)
            cand = (base + (h * p.burden_ohm / 2.0) * (ir - c)) / \
                   (1.0 + h * p.burden_ohm * g / 2.0)
            if (abs(cand) <= p.knee_wb) == (la <= p.knee_wb) and \
               (cand >= 0) == (lam1 >= 0):
                lam1 = cand
                break
            lam1 = cand
        i_m = _magnetizing(lam1, p)
        i_s = ir - i_m
        v = p.burden_ohm * i_s
        lam = lam1
        out[n] = i_s * p.ratio
    return out
