"""Core saturation: piecewise-linear B-H curves and their flux-linkage /
current equivalents."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SaturationCurve:
    """Odd-symmetric piecewise-linear B-H curve.

    `breakpoints` holds the positive quadrant as (H, B) pairs in A/m and
    tesla, strictly increasing in both coordinates; the curve continues
    past the last point with the final segment slope and mirrors through
    the origin.  `residual_flux` is the default remnant flux as a
    fraction of the rated peak flux.
    """

    breakpoints: tuple
    residual_flux: float = 0.0

    def __post_init__(self):
        pts = tuple((float(h), float(b)) for h, b in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2:
            raise ValueError("need at least two breakpoints")
        h = np.array([p[0] for p in pts])
        b = np.array([p[1] for p in pts])
        if h[0] != 0.0 or b[0] != 0.0:
            raise ValueError("first breakpoint must be the origin")
        if np.any(np.diff(h) <= 0) or np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing in H and B")
        if not (-0.8 <= self.residual_flux <= 0.8):
            raise ValueError("residual_flux must lie in [-0.8, 0.8]")

    def b_of_h(self, h):
        """Odd-symmetric interpolation (with final-slope extrapolation)."""
        hs = np.array([p[0] for p in self.breakpoints])
        bs = np.array([p[1] for p in self.breakpoints])
        ha = np.abs(h)
        out = np.interp(ha, hs, bs)
        slope = (bs[-1] - bs[-2]) / (hs[-1] - hs[-2])
        over = ha > hs[-1]
        out = np.where(over, bs[-1] + (ha - hs[-1]) * slope, out)
        return np.sign(h) * out


@dataclass(frozen=True)
class CoreGeometry:
    """Turns / area / path length mapping B-H onto flux linkage vs current:
    lambda = turns * area * B,   i = path * H / turns."""

    turns: float = 1000.0
    area_m2: float = 0.5
    path_m: float = 10.0


@dataclass
class FluxCurrentCurve:
    """Monotone PWL i(lambda) map used by the saturable branches."""

    lam: np.ndarray   # positive-quadrant knots, lam[0] = 0
    cur: np.ndarray
    slopes: np.ndarray = field(init=False)      # d i / d lambda per segment
    intercepts: np.ndarray = field(init=False)  # i = intercept + slope * lam
    energy_at: np.ndarray = field(init=False)   # integral of i dlambda up to knot

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float)
        self.cur = np.asarray(self.cur, dtype=float)
        if self.lam[0] != 0 or self.cur[0] != 0:
            raise ValueError("curve must start at the origin")
        dl = np.diff(self.lam)
        di = np.diff(self.cur)
        if np.any(dl <= 0) or np.any(di <= 0):
            raise ValueError("curve must be strictly increasing")
        self.slopes = di / dl
        self.intercepts = self.cur[:-1] - self.slopes * self.lam[:-1]
        seg_energy = 0.5 * (self.cur[:-1] + self.cur[1:]) * dl
        self.energy_at = np.concatenate([[0.0], np.cumsum(seg_energy)])

    @property
    def n_segments(self):
        return len(self.slopes)

    def segment_of(self, lam_abs: float) -> int:
        """Segment index for |lambda| (the last segment extrapolates)."""
        s = int(np.searchsorted(self.lam[1:-1], lam_abs, side="right"))
        return min(s, self.n_segments - 1)

    def seg_linear(self, seg: int, sign: float):
        """(slope, intercept) of i(lambda) valid on the signed segment."""
        return self.slopes[seg], sign * self.intercepts[seg]

    def current(self, lam):
        lam = np.asarray(lam, dtype=float)
        sign = np.sign(lam)
        la = np.abs(lam)
        seg = np.minimum(np.searchsorted(self.lam[1:-1], la, side="right"),
                         self.n_segments - 1)
        return sign * (self.intercepts[seg] + self.slopes[seg] * la)

    def stored_energy(self, lam: float) -> float:
        la = abs(lam)
        seg = self.segment_of(la)
        base_lam = self.lam[seg]
        base_i = self.cur[seg]
        i_here = self.intercepts[seg] + self.slopes[seg] * la
        return float(self.energy_at[seg] + 0.5 * (base_i + i_here) * (la - base_lam))


def flux_current_curve(curve: SaturationCurve, geom: CoreGeometry) -> FluxCurrentCurve:
    lam = np.array([geom.turns * geom.area_m2 * b for _, b in curve.breakpoints])
    cur = np.array([geom.path_m * h / geom.turns for h, _ in curve.breakpoints])
    return FluxCurrentCurve(lam=lam, cur=cur)


def default_power_core_curve() -> SaturationCurve:
    """Seven-breakpoint curve shaped like a grain-oriented core knee.

    With the default geometry (lambda = 500 B, i = 0.01 H) and the
    500 MVA / 230 kV rating this gives an unsaturated magnetizing
    inductance matching a 0.5 % exciting current and a deep-saturation
    slope near 0.010 H (~0.036 pu), landing energization peaks in the
    several-times-rated range.
    """
    pts = [
        (0.0, 0.0),
        (535.0, 0.60),        # L ~ 56 H unsaturated
        (890.0, 1.00),
        (1340.0, 1.10),       # knee forming, L ~ 11 H
        (3120.0, 1.18),       # L ~ 2.25 H
        (24500.0, 1.30),      # L ~ 0.28 H
        (212000.0, 1.60),     # L ~ 0.08 H
        (3212000.0, 2.20),    # deep saturation, L ~ 0.010 H (~0.036 pu)
    ]
    return SaturationCurve(breakpoints=tuple(pts))


def default_power_core_geometry() -> CoreGeometry:
    return CoreGeometry(turns=1000.0, area_m2=0.5, path_m=10.0)
