"""Event simulation: network assembly, trapezoidal run, CT measurement,
differential-current formation and labeling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ct import apply_ct
from .engine import TransientSolver
from .events import (
    EventSpec, INTERNAL_KINDS, KIND_EXTERNAL, KIND_SYMPATHETIC, LABEL_CODES,
    UNIT_CODES,
)
from .network import NetworkParams
from .rating import TransformerRating, ispar_rating
from .saturation import CoreGeometry, SaturationCurve
from .scenarios import build_scenario

DEFAULT_SAMPLE_RATE = 10_000.0
POST_CYCLES = 4.0
POST_CYCLES_SLOW = 8.0   # sympathetic inrush develops over several cycles


@dataclass
class WaveformRecord:
    id_a: np.ndarray
    id_b: np.ndarray
    id_c: np.ndarray
    sample_rate: float
    label: str
    unit_label: str
    spec: EventSpec | None
    seed: int

    def __post_init__(self):
        if not (len(self.id_a) == len(self.id_b) == len(self.id_c)):
            raise ValueError("phase arrays must have equal length")

    @property
    def phases(self) -> np.ndarray:
        return np.vstack([self.id_a, self.id_b, self.id_c])

    @property
    def n_samples(self) -> int:
        return len(self.id_a)

    @property
    def label_code(self) -> int:
        return LABEL_CODES[self.label]

    @property
    def unit_code(self) -> int:
        return UNIT_CODES[self.unit_label]

    def samples_per_cycle(self, f: float = 60.0) -> int:
        return int(round(self.sample_rate / f))


def _post_cycles_for(kind: str | None) -> float:
    return POST_CYCLES_SLOW if kind == KIND_SYMPATHETIC else POST_CYCLES


def _add_noise(phases: np.ndarray, snr_db: float | None, rng) -> np.ndarray:
    if snr_db is None:
        return phases
    power = np.mean(phases ** 2)
    if power == 0.0:
        return phases
    sigma = math.sqrt(power / (10.0 ** (snr_db / 10.0)))
    return phases + rng.normal(0.0, sigma, phases.shape)


def simulate_event(spec: EventSpec,
                   rating: TransformerRating | None = None,
                   curve: SaturationCurve | None = None,
                   geometry: CoreGeometry | None = None,
                   net_params: NetworkParams | None = None,
                   seed: int = 0,
                   sample_rate: float = DEFAULT_SAMPLE_RATE,
                   post_cycles: float | None = None) -> WaveformRecord:
    """Simulate one labeled event and form the 3-phase differential
    currents (ideal-ratio CTs except for the external-fault class, which
    runs the saturable CT model on both sides)."""
    rating = rating or ispar_rating()
    net_params = net_params or NetworkParams()
    h = 1.0 / sample_rate
    cycles_post = post_cycles if post_cycles is not None else _post_cycles_for(spec.kind)
    t_end = spec.inception_time + cycles_post / rating.f
    if spec.inception_time >= t_end:
        raise ValueError("inceptionTime must fall inside the simulated span")

    scenario = build_scenario(spec, rating, curve, geometry, net_params)
    solver = TransientSolver(scenario.network, h)
    solver.init_ac_steady_state()
    out = solver.run(t_end)

    ids = []
    for ph in ("A", "B", "C"):
        i1 = out[f"ct1_{ph}"]
        i2 = out[f"ct2_{ph}"]
        if spec.kind == KIND_EXTERNAL:
            i1 = apply_ct(i1, net_params.ct1, h)
            i2 = apply_ct(i2, net_params.ct2, h)
        ids.append(i1 - i2)
    phases = np.vstack(ids)
    rng = np.random.default_rng(seed)
    phases = _add_noise(phases, net_params.noise_snr_db, rng)

    unit_label = spec.unit if spec.kind in INTERNAL_KINDS else "none"
    return WaveformRecord(
        id_a=phases[0], id_b=phases[1], id_c=phases[2],
        sample_rate=sample_rate, label=spec.kind, unit_label=unit_label,
        spec=spec, seed=seed,
    )


def simulate_healthy(rating: TransformerRating | None = None,
                     curve: SaturationCurve | None = None,
                     geometry: CoreGeometry | None = None,
                     net_params: NetworkParams | None = None,
                     seed: int = 0,
                     sample_rate: float = DEFAULT_SAMPLE_RATE,
                     duration_cycles: float = 7.0) -> WaveformRecord:
    """Steady-state record with no event switched in."""
    rating = rating or ispar_rating()
    net_params = net_params or NetworkParams()
    h = 1.0 / sample_rate
    scenario = build_scenario(None, rating, curve, geometry, net_params)
    solver = TransientSolver(scenario.network, h)
    solver.init_ac_steady_state()
    out = solver.run(duration_cycles / rating.f)
    phases = np.vstack([out[f"ct1_{p}"] - out[f"ct2_{p}"] for p in ("A", "B", "C")])
    rng = np.random.default_rng(seed)
    phases = _add_noise(phases, net_params.noise_snr_db, rng)
    return WaveformRecord(
        id_a=phases[0], id_b=phases[1], id_c=phases[2],
        sample_rate=sample_rate, label="healthy", unit_label="none",
        spec=None, seed=seed,
    )
