"""Energization flux trajectory of an unloaded core."""

from __future__ import annotations

import numpy as np


def inrush_flux(t, phi_r: float, phi_m: float, t_prime: float, omega: float):
    """Core flux after closing at t_prime onto a cosine voltage source.

    phi(t) = phi_r + phi_m cos(omega t') - phi_m cos(omega (t + t'))

    t is time since energization; phi_r the remnant flux; phi_m the peak
    steady-state flux.  At t = 0 the two cosine terms cancel and the flux
    is the remnant alone.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    t = np.asarray(t, dtype=float)
    out = phi_r + phi_m * np.cos(omega * t_prime) - phi_m * np.cos(omega * (t + t_prime))
    return float(out) if out.ndim == 0 else out
