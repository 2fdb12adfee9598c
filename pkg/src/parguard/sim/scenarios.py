"""Circuit assembly for each event kind.

One three-phase network spans two sources, two line sections, the
protected zone (series unit in the line path, exciting unit in shunt)
and the CT probe branches.  Faulted units swap their healthy branch for
the 4x4 / 6x6 coupled-coil fault model with switchable shunts at the
winding taps; disturbances reuse the healthy units and manipulate
sources, breakers or the capacitor bank.

Phase-angle-regulator action is approximated per phase as the series
quadrature EMF of an ideal shifter at the spec'd tap, so cross-phase
magnetic coupling is not represented (class structure, not PSCAD
fidelity, is the goal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    Capacitor, Coupled, Emf, GROUND, Inductor, Network, Resistor, SatFlux, SwitchR,
)
from .events import (
    EventSpec, KIND_EXTERNAL, KIND_INRUSH, KIND_INTERNAL_PG, KIND_INTERNAL_TT,
    KIND_INTERNAL_WW, KIND_OVEREXC, KIND_SYMPATHETIC, PHASES,
)
from .inductance import build_three_winding_matrix, build_two_winding_matrix
from .network import NetworkParams
from .rating import TransformerRating
from .saturation import (
    CoreGeometry, SaturationCurve, default_power_core_curve,
    default_power_core_geometry, flux_current_curve,
)

PHASE_ANGLES = {"A": 0.0, "B": -2.0 * math.pi / 3.0, "C": 2.0 * math.pi / 3.0}
FAULT_DURATION_S = 0.05           # three cycles at 60 Hz
OVEREXC_STEPS = {1: 1.25, 2: 1.32, 3: 1.40}
CAPACITOR_XC_PU = {1: 1.0, 2: 0.8, 3: 0.67}
_R_FLOOR = 1e-4


@dataclass
class Scenario:
    network: Network
    rating: TransformerRating
    meta: dict


def _residual_pattern(spec: EventSpec, lam_m: float) -> dict:
    """Designated phase carries the remnant flux, the other two balance it."""
    out = {ph: 0.0 for ph in PHASES}
    if spec.residual_level is None:
        return out
    lead = spec.residual_phase
    for ph in PHASES:
        out[ph] = spec.residual_level * lam_m * (1.0 if ph == lead else -0.5)
    return out


def _quadrature(amp: float, theta: float, spec: EventSpec, max_shift_rad: float):
    """Amplitude and phase of the ideal-shifter series EMF at this tap."""
    sign = 1.0 if spec.phase_shift == "forward" else -1.0
    alpha = sign * max_shift_rad * spec.tap_ratio
    mag = 2.0 * amp * abs(math.sin(alpha / 2.0))
    phase = theta + math.copysign(math.pi / 2.0, alpha) + alpha / 2.0
    return mag, phase


class _Builder:
    def __init__(self, spec, rating, curve, geom, net_params):
        self.spec = spec
        self.rating = rating
        self.params = net_params
        self.net = Network(rating.omega)
        self.z = rating.v1 / rating.i1
        self.vpk = math.sqrt(2.0) * rating.v1 * net_params.source_amp_pu
        self.lam_m = math.sqrt(2.0) * rating.v1 / rating.omega
        self.flux_curve = flux_current_curve(curve, geom)
        self.tap_p = {}
        self.tap_s = {}
        self.coils = {}
        self.nodes = {}

    def ohm(self, pu):
        return pu * self.z

    def henry(self, x_pu):
        return x_pu * self.z / self.rating.omega

    # -- backbone ---------------------------------------------------------

    def build_backbone(self):
        p = self.params
        spec = self.spec
        kind = spec.kind if spec else None
        w = self.rating.omega
        residuals = _residual_pattern(spec, self.lam_m) if spec else {ph: 0.0 for ph in PHASES}
        overexc_load = kind == KIND_OVEREXC and spec.switch_target == "load"
        amp2 = OVEREXC_STEPS[spec.switch_variant] * self.vpk if overexc_load else None

        for ph in PHASES:
            theta = PHASE_ANGLES[ph]
            n = self.nodes[ph] = {}
            bus1 = n["bus1"] = self.net.node()
            mid1 = n["mid1"] = self.net.node()
            ct1 = n["ct1"] = self.net.node()
            nin = n["in"] = self.net.node()
            nout = n["out"] = self.net.node()
            ct2 = n["ct2"] = self.net.node()
            mid2 = n["mid2"] = self.net.node()
            bus2 = n["bus2"] = self.net.node()

            self.net.source(bus1, self.ohm(p.r_sys_pu), self.henry(p.x_sys_pu),
                            self.vpk, theta,
                            amp2=amp2,
                            t_step=spec.inception_time if overexc_load else None)
            half_r, half_l = self.ohm(p.r_line_pu) / 2, self.henry(p.x_line_pu) / 2
            self.net.rl_series(bus1, mid1, half_r, half_l)
            self.net.rl_series(mid1, ct1, half_r, half_l)
            probe1 = self.net.add(Resistor(ct1, nin, p.probe_r_ohm))
            self.net.probe(f"ct1_{ph}", probe1)
            probe2 = self.net.add(Resistor(nout, ct2, p.probe_r_ohm))
            self.net.probe(f"ct2_{ph}", probe2)
            self.net.rl_series(ct2, mid2, half_r, half_l)
            self.net.rl_series(mid2, bus2, half_r, half_l)
            theta2 = theta + math.radians(p.source2_angle_deg)
            self.net.source(bus2, self.ohm(p.r_sys_pu), self.henry(p.x_sys_pu),
                            self.vpk, theta2)
            self.net.add(Resistor(bus2, GROUND, self.ohm(p.r_load_pu)))

            if kind == KIND_OVEREXC and spec.switch_target == "capacitor":
                xc = CAPACITOR_XC_PU[spec.switch_variant]
                c = 1.0 / (w * xc * self.z)
                cnode = self.net.node()
                self.net.add(SwitchR(bus2, cnode, 0.05, t_close=spec.inception_time))
                self.net.add(Capacitor(cnode, GROUND, c))

            if kind == KIND_SYMPATHETIC:
                gate = self.net.node()
                core = self.net.node()
                self.net.add(SwitchR(ct1, gate, p.breaker_r_ohm,
                                     t_close=spec.inception_time))
                self.net.rl_series(gate, core, self.ohm(p.r_exciting_pu),
                                   self.henry(p.x_exciting_pu))
                sat = SatFlux(core, GROUND, self.flux_curve,
                              lam_reset=(spec.inception_time, residuals[ph]))
                self.net.add(sat)
                self.net.add(Resistor(core, GROUND, self.ohm(p.r_core_loss_pu)))

    # -- healthy units ------------------------------------------------------

    def healthy_series_unit(self):
        """Two half-winding impedances around the midpoint junction; the
        shifter injection enters the load-side half."""
        p = self.params
        for ph in PHASES:
            theta = PHASE_ANGLES[ph]
            n = self.nodes[ph]
            mid = n["mid_t"] = self.net.node()
            self.net.rl_series(n["in"], mid, self.ohm(p.r_series_pu) / 2,
                               self.henry(p.x_series_pu) / 2)
            mag, phase = _quadrature(self.vpk, theta, self.spec, math.radians(p.max_shift_deg)) \
                if self.spec else (0.0, theta)
            x = self.net.node()
            if mag > 0:
                self.net.add(Emf(mid, x, self.ohm(p.r_series_pu) / 2, mag, phase,
                                 self.rating.omega))
            else:
                self.net.add(Resistor(mid, x, self.ohm(p.r_series_pu) / 2))
            self.net.add(Inductor(x, n["out"], self.henry(p.x_series_pu) / 2))

    def healthy_exciting_unit(self, behind_breaker=False, residuals=None):
        """Saturable magnetizing shunt tapping the series midpoint."""
        p = self.params
        residuals = residuals or {ph: 0.0 for ph in PHASES}
        for ph in PHASES:
            n = self.nodes[ph]
            feed = n["mid_t"]
            if behind_breaker:
                gate = self.net.node()
                self.net.add(SwitchR(feed, gate, p.breaker_r_ohm,
                                     t_close=self.spec.inception_time))
                feed = gate
            core = self.net.node()
            self.net.rl_series(feed, core, self.ohm(p.r_exciting_pu),
                               self.henry(p.x_exciting_pu))
            reset = (self.spec.inception_time, residuals[ph]) if behind_breaker else None
            self.net.add(SatFlux(core, GROUND, self.flux_curve,
                                 lam_reset=reset))
            self.net.add(Resistor(core, GROUND, self.ohm(p.r_core_loss_pu)))

    # -- faulted units ------------------------------------------------------

    def _coil_resistances(self, model):
        r_base = self.params.winding_r_pu * self.z
        frac = np.array([model.L[k, k] / max(model.L.trace(), 1e-12)
                         for k in range(model.order)])
        return np.maximum(r_base * (0.2 + frac), _R_FLOOR)

    def faulted_series_unit(self):
        """Half-windings 1 and 2 carry the line around the midpoint; the
        excited winding 3 takes the quadrature drive.  Primary-side taps
        sit on the source half, secondary-side taps on the load half."""
        p = self.params
        spec = self.spec
        wp = spec.winding_percent
        model = build_three_winding_matrix(self.rating, wp, wp)
        R = self._coil_resistances(model)
        for ph in PHASES:
            theta = PHASE_ANGLES[ph]
            n = self.nodes[ph]
            mid = n["mid_t"] = self.net.node()
            tp = self.tap_p[ph] = self.net.node()
            ts = self.tap_s[ph] = self.net.node()
            xq = self.net.node()
            w3m = self.net.node()
            pairs = [
                (n["in"], tp), (tp, mid),         # source-side half winding
                (mid, ts), (ts, n["out"]),        # load-side half winding
                (xq, w3m), (w3m, GROUND),         # excited winding
            ]
            block = Coupled(pairs, model.L, R)
            self.net.add(block)
            self.coils[ph] = block
            mag, phase = _quadrature(self.vpk, theta, spec,
                                     math.radians(p.max_shift_deg))
            # 2:1 series-to-excited turns, so drive at half the injection
            mag = max(mag / 2.0, 1e-6)
            self.net.add(Emf(GROUND, xq, self.ohm(p.r_quadrature_pu), mag, phase,
                             self.rating.omega))

    def faulted_exciting_unit(self):
        """Shunt winding 1 at the series midpoint; winding 2 is connected
        with reversed sense and lightly loaded."""
        p = self.params
        spec = self.spec
        model = build_two_winding_matrix(self.rating, spec.winding_percent)
        R = self._coil_resistances(model)
        for ph in PHASES:
            n = self.nodes[ph]
            tp = self.tap_p[ph] = self.net.node()
            ts = self.tap_s[ph] = self.net.node()
            xe = self.net.node()
            pairs = [
                (n["mid_t"], tp), (tp, GROUND),   # winding 1 in shunt
                (ts, xe), (GROUND, ts),           # winding 2, reversed sense
            ]
            block = Coupled(pairs, model.L, R)
            self.net.add(block)
            self.coils[ph] = block
            self.net.add(Resistor(xe, GROUND, self.ohm(p.z_w2_load_pu)))
            self.net.add(Inductor(xe, GROUND, self.henry(p.x_w2_load_pu),
                                  self.ohm(p.z_w2_load_pu) * 0.1))

    # -- fault switches -------------------------------------------------------

    def _shunt_fault_switches(self, taps: dict, fault_type: str, rf: float,
                              t_close: float):
        t_open = t_close + FAULT_DURATION_S
        phases = [ph for ph in PHASES if ph.lower() in fault_type.replace("g", "")]
        grounded = fault_type.endswith("g")
        if fault_type in ("abc", "abcg"):
            phases = list(PHASES)
        if grounded or fault_type in ("abc",):
            if fault_type == "abc":
                star = self.net.node()
                for ph in phases:
                    self.net.add(SwitchR(taps[ph], star, rf, t_close, t_open))
            else:
                for ph in phases:
                    self.net.add(SwitchR(taps[ph], GROUND, rf, t_close, t_open))
        else:
            a, b = phases
            self.net.add(SwitchR(taps[a], taps[b], rf, t_close, t_open))

    def attach_internal_fault(self):
        spec = self.spec
        rf = spec.fault_resistance
        t0 = spec.inception_time
        t1 = t0 + FAULT_DURATION_S
        if spec.kind == KIND_INTERNAL_PG:
            taps = self.tap_p if spec.side == "primary" else self.tap_s
            self._shunt_fault_switches(taps, spec.fault_type, rf, t0)
        elif spec.kind == KIND_INTERNAL_TT:
            ph = spec.faulted_phase
            block = self.coils[ph]
            coil = 0 if spec.side == "primary" else 2
            a, b = block.pairs[coil]
            self.net.add(SwitchR(a, b, rf, t0, t1))
            if spec.unit == "series":
                # turn faults inside the in-line winding stay invisible to a
                # two-CT through-differential unless the grounded core/tank
                # participates; arc a resistive path off the faulted tap
                tap = self.tap_p[ph] if spec.side == "primary" else self.tap_s[ph]
                self.net.add(SwitchR(tap, GROUND,
                                     self.params.r_fault_ground_ohm + rf, t0, t1))
        elif spec.kind == KIND_INTERNAL_WW:
            ph = spec.faulted_phase
            self.net.add(SwitchR(self.tap_p[ph], self.tap_s[ph], rf, t0, t1))
            if spec.unit == "series":
                self.net.add(SwitchR(self.tap_s[ph], GROUND,
                                     self.params.r_fault_ground_ohm + rf, t0, t1))

    def attach_external_fault(self):
        spec = self.spec
        node_name = "mid1" if spec.fault_location == "line1" else "mid2"
        taps = {ph: self.nodes[ph][node_name] for ph in PHASES}
        self._shunt_fault_switches(taps, spec.fault_type, spec.fault_resistance,
                                   spec.inception_time)


def build_scenario(spec: EventSpec | None,
                   rating: TransformerRating,
                   curve: SaturationCurve | None = None,
                   geometry: CoreGeometry | None = None,
                   net_params: NetworkParams | None = None) -> Scenario:
    """Assemble the network for one event spec (None builds the healthy,
    no-event system)."""
    curve = curve or default_power_core_curve()
    geometry = geometry or default_power_core_geometry()
    net_params = net_params or NetworkParams()
    b = _Builder(spec, rating, curve, geometry, net_params)
    b.build_backbone()
    kind = spec.kind if spec else None

    if kind in (KIND_INTERNAL_PG, KIND_INTERNAL_TT, KIND_INTERNAL_WW):
        if spec.unit == "series":
            b.faulted_series_unit()
            b.healthy_exciting_unit()
        else:
            b.healthy_series_unit()
            b.faulted_exciting_unit()
        b.attach_internal_fault()
    elif kind == KIND_INRUSH:
        b.healthy_series_unit()
        b.healthy_exciting_unit(
            behind_breaker=True,
            residuals=_residual_pattern(spec, b.lam_m),
        )
    elif kind in (KIND_SYMPATHETIC, KIND_OVEREXC, KIND_EXTERNAL, None):
        b.healthy_series_unit()
        b.healthy_exciting_unit()
        if kind == KIND_EXTERNAL:
            b.attach_external_fault()
    else:
        raise ValueError(f"no scenario for kind {kind!r}")

    return Scenario(network=b.net, rating=rating, meta={"lam_m": b.lam_m})
