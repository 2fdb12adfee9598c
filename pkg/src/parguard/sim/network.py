"""System constants around the protected zone: sources, lines, load,
core-loss damping and the CT models.

All impedances are entered in per-unit on the transformer base and
converted by the scenario builder.  These are artifact defaults, not
quoted study values.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CTParams:
    """Simplified current transformer: ideal ratio into a saturable
    magnetizing branch in parallel with a resistive burden."""

    ratio: float = 250.0
    burden_ohm: float = 2.0
    knee_wb: float = 0.5
    l_unsat_h: float = 40.0
    l_sat_h: float = 0.005

    def __post_init__(self):
        if min(self.ratio, self.burden_ohm, self.knee_wb,
               self.l_unsat_h, self.l_sat_h) <= 0:
            raise ValueError("CT parameters must be positive")


@dataclass(frozen=True)
class NetworkParams:
    source_amp_pu: float = 1.0          # source EMF magnitude, per unit
    source2_angle_deg: float = -12.0    # remote source angle (sets load flow)
    r_sys_pu: float = 0.012             # Thevenin resistance, both ends
    x_sys_pu: float = 0.06
    r_line_pu: float = 0.015            # per line (two halves)
    x_line_pu: float = 0.09
    r_series_pu: float = 0.005          # healthy series-unit branch
    x_series_pu: float = 0.10
    r_exciting_pu: float = 0.004        # exciting-unit leakage feed
    x_exciting_pu: float = 0.03
    r_core_loss_pu: float = 500.0       # shunt damping across the core branch
    r_load_pu: float = 25.0             # light parallel load at the远 bus
    r_quadrature_pu: float = 0.01       # drive impedance of the excited winding
    r_stabilizer_pu: float = 0.05       # closed tertiary loop resistance
    z_w2_load_pu: float = 100.0          # light loading of a faulted unit's far winding
    x_w2_load_pu: float = 10.0
    winding_r_pu: float = 0.002         # series resistance per sub-coil base
    r_fault_ground_ohm: float = 150.0    # tank involvement of in-line turn faults
    breaker_r_ohm: float = 1e-3
    probe_r_ohm: float = 1e-4
    max_shift_deg: float = 25.0         # PAR range at full tap
    noise_snr_db: float | None = 60.0
    ct1: CTParams = field(default_factory=lambda: CTParams(burden_ohm=0.8, knee_wb=0.55))
    ct2: CTParams = field(default_factory=lambda: CTParams(burden_ohm=2.2, knee_wb=0.22))
