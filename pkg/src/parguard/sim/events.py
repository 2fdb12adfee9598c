"""Event taxonomy and the parameter-sweep domains.

The six sweep tables reproduce the published case counts exactly:
33,264 internal phase & ground faults, 9,072 turn-to-turn, 4,536
winding-to-winding, 720 overexcitation, 2,520 + 2,520 inrush and
sympathetic inrush, 7,920 external faults (60,552 total).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

KIND_INTERNAL_PG = "internal-phase-ground"
KIND_INTERNAL_TT = "internal-turn-turn"
KIND_INTERNAL_WW = "internal-winding-winding"
KIND_INRUSH = "magnetizing-inrush"
KIND_SYMPATHETIC = "sympathetic-inrush"
KIND_OVEREXC = "overexcitation"
KIND_EXTERNAL = "external-fault-ct-sat"

EVENT_KINDS = (
    KIND_INTERNAL_PG, KIND_INTERNAL_TT, KIND_INTERNAL_WW,
    KIND_INRUSH, KIND_SYMPATHETIC, KIND_OVEREXC, KIND_EXTERNAL,
)
INTERNAL_KINDS = (KIND_INTERNAL_PG, KIND_INTERNAL_TT, KIND_INTERNAL_WW)
DISTURBANCE_KINDS = (KIND_INRUSH, KIND_SYMPATHETIC, KIND_OVEREXC, KIND_EXTERNAL)

LABEL_CODES = {k: i for i, k in enumerate(EVENT_KINDS + ("healthy",))}
UNIT_CODES = {"none": 0, "series": 1, "exciting": 2}

FAULT_TYPES = ("ag", "bg", "cg", "abg", "acg", "bcg", "ab", "ac", "bc", "abc", "abcg")

# sweep domains
RESISTANCES_PG = (0.01, 0.1, 1.0)
RESISTANCES_TT = (0.01, 0.5, 1.0)
RESISTANCES_ALL = (0.01, 0.1, 0.5, 1.0)
WINDING_PERCENTS = (20.0, 50.0, 70.0)
INCEPTION_BASE_S = 0.05            # three pre-event cycles at 60 Hz
INCEPTION_STEP_S = 1.38e-3
INCEPTION_OFFSETS = tuple(i * INCEPTION_STEP_S for i in range(12))
TAPS_SERIES = (0.2, 0.4, 0.6, 0.8, 1.0)
TAPS_EXCITING = (1.0, 0.5)
TAPS_DISTURBANCE = (0.2, 0.4, 0.6, 0.8, 1.0)
SHIFTS = ("forward", "backward")
RESIDUAL_LEVELS = (-0.8, -0.6, -0.4, 0.0, 0.4, 0.6, 0.8)
PHASES = ("A", "B", "C")
SWITCH_TARGETS = ("load", "capacitor")
SWITCH_VARIANTS = (1, 2, 3)
FAULT_LOCATIONS = ("line1", "line2")


@dataclass(frozen=True)
class EventSpec:
    kind: str
    unit: str | None = None            # series | exciting (internal kinds)
    side: str | None = None            # primary | secondary
    fault_type: str | None = None      # one of FAULT_TYPES
    fault_resistance: float | None = None
    winding_percent: float | None = None
    inception_time: float = INCEPTION_BASE_S
    phase_shift: str = "forward"
    tap_ratio: float = 1.0
    switch_target: str | None = None   # overexcitation only
    switch_variant: int | None = None
    fault_location: str | None = None  # external only
    faulted_phase: str | None = None   # turn-turn / winding-winding
    residual_level: float | None = None
    residual_phase: str | None = None

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if not (0.0 < self.tap_ratio <= 1.0):
            raise ValueError("tap_ratio must lie in (0, 1]")
        if self.phase_shift not in SHIFTS:
            raise ValueError("phase_shift must be 'forward' or 'backward'")
        if self.inception_time <= 0:
            raise ValueError("inception_time must be positive")
        checker = {
            KIND_INTERNAL_PG: self._check_internal_pg,
            KIND_INTERNAL_TT: self._check_internal_coil,
            KIND_INTERNAL_WW: self._check_internal_coil,
            KIND_INRUSH: self._check_inrush,
            KIND_SYMPATHETIC: self._check_inrush,
            KIND_OVEREXC: self._check_overexc,
            KIND_EXTERNAL: self._check_external,
        }[self.kind]
        checker()

    # -- per-kind parameter domains ------------------------------------

    def _need(self, **fields):
        for name, ok in fields.items():
            if not ok:
                raise ValueError(f"{self.kind}: invalid or missing {name}: "
                                 f"{getattr(self, name)!r}")

    def _forbid(self, *names):
        for name in names:
            if getattr(self, name) is not None:
                raise ValueError(f"{self.kind}: {name} does not apply")

    def _check_tap_internal(self):
        taps = TAPS_SERIES if self.unit == "series" else TAPS_EXCITING
        self._need(tap_ratio=self.tap_ratio in taps)

    def _check_internal_pg(self):
        self._need(
            unit=self.unit in ("series", "exciting"),
            side=self.side in ("primary", "secondary"),
            fault_type=self.fault_type in FAULT_TYPES,
            fault_resistance=self.fault_resistance in RESISTANCES_ALL,
            winding_percent=self.winding_percent in WINDING_PERCENTS,
        )
        self._forbid("switch_target", "switch_variant", "fault_location",
                     "residual_level", "residual_phase", "faulted_phase")
        self._check_tap_internal()

    def _check_internal_coil(self):
        self._need(
            unit=self.unit in ("series", "exciting"),
            fault_resistance=self.fault_resistance in RESISTANCES_ALL,
            winding_percent=self.winding_percent in WINDING_PERCENTS,
            faulted_phase=self.faulted_phase in PHASES,
        )
        if self.kind == KIND_INTERNAL_TT:
            self._need(side=self.side in ("primary", "secondary"))
        else:
            self._forbid("side")  # winding-winding bridges both windings
        self._forbid("switch_target", "switch_variant", "fault_location",
                     "residual_level", "residual_phase", "fault_type")
        self._check_tap_internal()

    def _check_inrush(self):
        self._need(
            residual_level=self.residual_level in RESIDUAL_LEVELS,
            residual_phase=self.residual_phase in PHASES,
            tap_ratio=self.tap_ratio in TAPS_DISTURBANCE,
        )
        self._forbid("unit", "side", "fault_type", "fault_resistance",
                     "winding_percent", "switch_target", "switch_variant",
                     "fault_location", "faulted_phase")

    def _check_overexc(self):
        self._need(
            switch_target=self.switch_target in SWITCH_TARGETS,
            switch_variant=self.switch_variant in SWITCH_VARIANTS,
            tap_ratio=self.tap_ratio in TAPS_DISTURBANCE,
        )
        self._forbid("unit", "side", "fault_type", "fault_resistance",
                     "winding_percent", "fault_location", "faulted_phase",
                     "residual_level", "residual_phase")

    def _check_external(self):
        self._need(
            fault_type=self.fault_type in FAULT_TYPES,
            fault_resistance=self.fault_resistance in RESISTANCES_ALL,
            fault_location=self.fault_location in FAULT_LOCATIONS,
            tap_ratio=self.tap_ratio in TAPS_DISTURBANCE,
        )
        self._forbid("unit", "side", "switch_target", "switch_variant",
                     "winding_percent", "faulted_phase",
                     "residual_level", "residual_phase")

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("unit", "side", "fault_type", "fault_resistance",
                     "winding_percent", "inception_time", "phase_shift",
                     "tap_ratio", "switch_target", "switch_variant",
                     "fault_location", "faulted_phase", "residual_level",
                     "residual_phase"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "EventSpec":
        return cls(**d)


def _times():
    return [INCEPTION_BASE_S + off for off in INCEPTION_OFFSETS]


def table1_internal_pg_grid() -> list[EventSpec]:
    """Internal phase & ground faults: 23,760 series + 9,504 exciting."""
    out = []
    for unit in ("series", "exciting"):
        taps = TAPS_SERIES if unit == "series" else TAPS_EXCITING
        for fr in RESISTANCES_PG:
            for wp in WINDING_PERCENTS:
                for ft in FAULT_TYPES:
                    for t in _times():
                        for side in ("primary", "secondary"):
                            for shift in SHIFTS:
                                for tap in taps:
                                    out.append(EventSpec(
                                        kind=KIND_INTERNAL_PG, unit=unit, side=side,
                                        fault_type=ft, fault_resistance=fr,
                                        winding_percent=wp, inception_time=t,
                                        phase_shift=shift, tap_ratio=tap,
                                    ))
    return out


def table2_turn_turn_grid() -> list[EventSpec]:
    """Turn-to-turn faults: 6,480 series + 2,592 exciting."""
    out = []
    for unit in ("series", "exciting"):
        taps = TAPS_SERIES if unit == "series" else TAPS_EXCITING
        for fr in RESISTANCES_TT:
            for wp in WINDING_PERCENTS:
                for t in _times():
                    for phase in PHASES:
                        for side in ("primary", "secondary"):
                            for shift in SHIFTS:
                                for tap in taps:
                                    out.append(EventSpec(
                                        kind=KIND_INTERNAL_TT, unit=unit, side=side,
                                        faulted_phase=phase, fault_resistance=fr,
                                        winding_percent=wp, inception_time=t,
                                        phase_shift=shift, tap_ratio=tap,
                                    ))
    return out


def table2_winding_winding_grid() -> list[EventSpec]:
    """Winding-to-winding faults: 3,240 series + 1,296 exciting."""
    out = []
    for unit in ("series", "exciting"):
        taps = TAPS_SERIES if unit == "series" else TAPS_EXCITING
        for fr in RESISTANCES_TT:
            for wp in WINDING_PERCENTS:
                for t in _times():
                    for phase in PHASES:
                        for shift in SHIFTS:
                            for tap in taps:
                                out.append(EventSpec(
                                    kind=KIND_INTERNAL_WW, unit=unit,
                                    faulted_phase=phase, fault_resistance=fr,
                                    winding_percent=wp, inception_time=t,
                                    phase_shift=shift, tap_ratio=tap,
                                ))
    return out


def table3_overexcitation_grid() -> list[EventSpec]:
    """Overexcitation: 720 cases (load and capacitor switching, 3 severities)."""
    out = []
    for target in SWITCH_TARGETS:
        for variant in SWITCH_VARIANTS:
            for t in _times():
                for tap in TAPS_DISTURBANCE:
                    for shift in SHIFTS:
                        out.append(EventSpec(
                            kind=KIND_OVEREXC, switch_target=target,
                            switch_variant=variant, inception_time=t,
                            tap_ratio=tap, phase_shift=shift,
                        ))
    return out


def _inrush_like_grid(kind) -> list[EventSpec]:
    out = []
    for level in RESIDUAL_LEVELS:
        for phase in PHASES:
            for t in _times():
                for tap in TAPS_DISTURBANCE:
                    for shift in SHIFTS:
                        out.append(EventSpec(
                            kind=kind, residual_level=level, residual_phase=phase,
                            inception_time=t, tap_ratio=tap, phase_shift=shift,
                        ))
    return out


def table4_inrush_grid() -> list[EventSpec]:
    """Magnetizing inrush: 21 x 12 x 5 x 2 = 2,520 cases."""
    return _inrush_like_grid(KIND_INRUSH)


def table5_sympathetic_grid() -> list[EventSpec]:
    """Sympathetic inrush: 2,520 cases."""
    return _inrush_like_grid(KIND_SYMPATHETIC)


def table6_external_grid() -> list[EventSpec]:
    """External faults with CT saturation: 7,920 cases."""
    out = []
    for fr in RESISTANCES_PG:
        for ft in FAULT_TYPES:
            for t in _times():
                for tap in TAPS_DISTURBANCE:
                    for shift in SHIFTS:
                        for loc in FAULT_LOCATIONS:
                            out.append(EventSpec(
                                kind=KIND_EXTERNAL, fault_type=ft,
                                fault_resistance=fr, inception_time=t,
                                tap_ratio=tap, phase_shift=shift,
                                fault_location=loc,
                            ))
    return out


GRID_BUILDERS = {
    "table1": table1_internal_pg_grid,
    "table2-tt": table2_turn_turn_grid,
    "table2-ww": table2_winding_winding_grid,
    "table3": table3_overexcitation_grid,
    "table4": table4_inrush_grid,
    "table5": table5_sympathetic_grid,
    "table6": table6_external_grid,
}


def full_grid() -> list[EventSpec]:
    out = []
    for name in ("table1", "table2-tt", "table2-ww", "table3", "table4",
                 "table5", "table6"):
        out.extend(GRID_BUILDERS[name]())
    return out
