"""Transformer nameplate data and the short-circuit leakage split."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TransformerRating:
    """Per-phase winding ratings of a (up to) three-winding transformer.

    Voltages in volts (per phase), currents in amperes, leakage
    reactances in per-unit on the winding pair base, magnetizing current
    fractions in per-unit, frequency in hertz.
    """

    v1: float
    v2: float
    v3: float
    i1: float
    i2: float
    i3: float
    x12: float = 0.10
    x13: float = 0.10
    x23: float = 0.10
    im1: float = 0.005
    im2: float = 0.005
    im3: float = 0.005
    f: float = 60.0

    def __post_init__(self):
        for name in ("v1", "v2", "v3", "i1", "i2", "i3", "f"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        for name in ("im1", "im2", "im3"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        x1, x2, x3 = self.leakage_split()
        if x1 < 0 or x2 < 0 or x3 < 0:
            raise ValueError(
                f"inconsistent leakage triple: X1={x1:.4g}, X2={x2:.4g}, X3={x3:.4g}"
            )

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.f

    def leakage_split(self):
        """Per-winding leakage reactances from the pairwise test values."""
        x1 = (self.x13 - self.x23 + self.x12) / 2.0
        x2 = (self.x23 - self.x13 + self.x12) / 2.0
        x3 = (self.x13 - self.x12 + self.x23) / 2.0
        return x1, x2, x3

    def base_impedances(self):
        return self.v1 / self.i1, self.v2 / self.i2, self.v3 / self.i3


def ispar_rating(s_mva: float = 500.0, v_ll_kv: float = 230.0, f: float = 60.0,
                 x12: float = 0.10, im: float = 0.005) -> TransformerRating:
    """Equal-voltage rating used throughout: 500 MVA, 230 kV / 230 kV."""
    v_ph = v_ll_kv * 1e3 / math.sqrt(3.0)
    i_ph = s_mva * 1e6 / (3.0 * v_ph)
    return TransformerRating(
        v1=v_ph, v2=v_ph, v3=v_ph,
        i1=i_ph, i2=i_ph, i3=i_ph,
        x12=x12, x13=x12, x23=x12,
        im1=im, im2=im, im3=im, f=f,
    )
