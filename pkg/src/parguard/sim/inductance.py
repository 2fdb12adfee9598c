"""Coupled-inductance matrices of the faulted transformer models.

Each winding splits into two sub-coils at the fault tap.  Leakage
divides linearly with the split fraction, magnetizing inductance with
its square, and every mutual is the geometric mean of the magnetizing
terms, which makes the magnetizing part an exact rank-one (ideal
transformer) coupling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rating import TransformerRating


@dataclass(frozen=True)
class InductanceModel:
    order: int
    L: np.ndarray
    fault_fractions: tuple
    coil_resistance: np.ndarray | None = None

    def __post_init__(self):
        if self.order not in (4, 6):
            raise ValueError("order must be 4 or 6")
        if self.L.shape != (self.order, self.order):
            raise ValueError("matrix shape does not match order")

    def psd_margin(self) -> float:
        """Most negative eigenvalue, scaled by max |L_ij| (>= -1e-9 is healthy)."""
        scale = np.max(np.abs(self.L))
        if scale == 0:
            return 0.0
        return float(np.linalg.eigvalsh(self.L).min() / scale)


def _check_fraction(name, value):
    if not (0.0 <= value <= 100.0):
        raise ValueError(f"{name} must be a percentage in [0, 100], got {value}")


def build_three_winding_matrix(rating: TransformerRating, fault1: float,
                               fault2: float) -> InductanceModel:
    """Six-coil model of a single-phase three-winding transformer.

    fault1 positions the tap on windings 1 and 3, fault2 on winding 2,
    both in percent of the winding.
    """
    _check_fraction("fault1", fault1)
    _check_fraction("fault2", fault2)
    w = rating.omega
    fa = fault1 * 0.01
    fb = 1.0 - fa
    fc = fault2 * 0.01
    fd = 1.0 - fc
    fe = fault1 * 0.01
    ff = 1.0 - fe
    z1, z2, z3 = rating.base_impedances()
    x1, x2, x3 = rating.leakage_split()
    lk1, lk2, lk3 = x1 * z1 / w, x2 * z2 / w, x3 * z3 / w
    l1 = rating.v1 / (w * rating.im1 * rating.i1)
    l2 = rating.v2 / (w * rating.im2 * rating.i2)
    l3 = rating.v3 / (w * rating.im3 * rating.i3)
    leak = np.array([lk1 * fa, lk1 * fb, lk2 * fc, lk2 * fd, lk3 * fe, lk3 * ff])
    mag = np.array([l1 * fa ** 2, l1 * fb ** 2, l2 * fc ** 2, l2 * fd ** 2,
                    l3 * fe ** 2, l3 * ff ** 2])
    root = np.sqrt(mag)
    L = np.outer(root, root)          # M_ij = sqrt(L_im L_jm), symmetric by construction
    np.fill_diagonal(L, leak + mag)
    return InductanceModel(order=6, L=L, fault_fractions=(fault1, fault2))


def build_two_winding_matrix(rating: TransformerRating, fault1: float) -> InductanceModel:
    """Four-coil model of a single-phase two-winding transformer; both
    windings split at the same percent position (mirroring the fe = fa
    convention of the three-winding build)."""
    _check_fraction("fault1", fault1)
    w = rating.omega
    fa = fault1 * 0.01
    fb = 1.0 - fa
    fc = fa
    fd = 1.0 - fc
    z1, z2, _ = rating.base_impedances()
    # two-winding short-circuit test gives one reactance; split it evenly
    x1 = x2 = rating.x12 / 2.0
    lk1, lk2 = x1 * z1 / w, x2 * z2 / w
    l1 = rating.v1 / (w * rating.im1 * rating.i1)
    l2 = rating.v2 / (w * rating.im2 * rating.i2)
    leak = np.array([lk1 * fa, lk1 * fb, lk2 * fc, lk2 * fd])
    mag = np.array([l1 * fa ** 2, l1 * fb ** 2, l2 * fc ** 2, l2 * fd ** 2])
    root = np.sqrt(mag)
    L = np.outer(root, root)
    np.fill_diagonal(L, leak + mag)
    return InductanceModel(order=4, L=L, fault_fractions=(fault1, fault1))
