"""Feature matrix assembly and export.

A capture window is a (3, n_c) array of one post-transient cycle of the
A, B, C differential currents.  Three feature modes are supported:

    time      3 scalar features x 3 phases      -> 9 columns
    coeffs    detail coefficients d_1..d_L x 3  -> length depends on spec
    combined  9 time + 9 selected wavelet-energy features -> 18 columns

plus the full wavelet-energy candidate pool used by feature selection.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .dwt import dwt_multilevel, max_useful_level, wavelet_energy
from .filters import WaveletSpec, get_bank
from .timedomain import (
    TimeFeatureParams,
    ar_coefficients,
    autocorrelation,
    avg_change_quantile,
    agg_linear_trend,
    count_peaks,
    energy_ratio_by_chunks,
    maximum,
)

PHASES = ("A", "B", "C")

MATRIX_MAGIC = b"PGMATRIX"
MATRIX_VERSION = 1
_HEADER = struct.Struct("<8sIQQQ28x")  # magic, version, rows, cols, schema bytes
assert _HEADER.size == 64


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    schema: tuple

    def __post_init__(self):
        if len(self.values) != len(self.schema):
            raise ValueError("schema length does not match value count")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite feature value")


def _time_scalar(x: np.ndarray, fname: str, p: TimeFeatureParams):
    if fname == "F1":
        return ar_coefficients(x, p.ar_order)[1], f"F1.ar_lag1_o{p.ar_order}"
    if fname == "F2":
        return maximum(x), "F2.max"
    if fname == "F3":
        ql, qh = p.default_corridor
        return avg_change_quantile(x, ql, qh), f"F3.acq_{ql}_{qh}"
    if fname == "F4":
        return (agg_linear_trend(x, p.trend_window, p.trend_aggregate),
                f"F4.trend_{p.trend_aggregate}_w{p.trend_window}")
    if fname == "F5":
        lag = p.ac_lags[0]
        return autocorrelation(x, lag), f"F5.ac_lag{lag}"
    if fname == "F6":
        return float(count_peaks(x, p.peak_support)), f"F6.peaks_m{p.peak_support}"
    if fname == "F7":
        return (energy_ratio_by_chunks(x, p.chunk_count, p.energy_chunk),
                f"F7.er_c{p.chunk_count}_j{p.energy_chunk}")
    raise ValueError(f"unknown time feature {fname!r}")


def time_features(window: np.ndarray, feature_set, params: TimeFeatureParams):
    """One scalar per (phase, feature); phases concatenated A, B, C."""
    vals, schema = [], []
    for ph, x in zip(PHASES, window):
        for fname in feature_set:
            v, tag = _time_scalar(np.asarray(x, dtype=float), fname, params)
            vals.append(v)
            schema.append(f"phase{ph}.{tag}")
    return np.array(vals), schema


def coeff_features(window: np.ndarray, spec: WaveletSpec):
    """Concatenated detail coefficients d_1..d_L per phase."""
    vals, schema = [], []
    for ph, x in zip(PHASES, window):
        res = dwt_multilevel(np.asarray(x, dtype=float), spec)
        for lvl, d in enumerate(res.details, start=1):
            vals.append(d)
            schema.extend(f"phase{ph}.{spec.wavelet}.d{lvl}[{k}]" for k in range(len(d)))
    return np.concatenate(vals), schema


def energy_features(window: np.ndarray, selections):
    """Wavelet energies for explicit (phase, wavelet, level) selections."""
    idx = {ph: i for i, ph in enumerate(PHASES)}
    cache: dict[tuple, np.ndarray] = {}
    vals, schema = [], []
    for ph, wavelet, level in selections:
        x = np.asarray(window[idx[ph]], dtype=float)
        key = (ph, wavelet)
        if key not in cache:
            bank = get_bank(wavelet)
            top = max_useful_level(len(x), bank.effective_length)
            cache[key] = wavelet_energy(dwt_multilevel(x, WaveletSpec(wavelet, top)).details)
        energies = cache[key]
        if not (1 <= level <= len(energies)):
            raise ValueError(f"level {level} not available for {wavelet} on this window")
        vals.append(energies[level - 1])
        schema.append(f"phase{ph}.{wavelet}.Ed{level}")
    return np.array(vals), schema


def energy_pool_schema(window_length: int, wavelets) -> list[tuple]:
    """All (phase, wavelet, level) energy candidates for a window length."""
    pool = []
    for ph in PHASES:
        for w in wavelets:
            top = max_useful_level(window_length, get_bank(w).effective_length)
            pool.extend((ph, w, lvl) for lvl in range(1, top + 1))
    return pool


def energy_pool_matrix(windows, wavelets):
    """Full energy candidate pool over a batch of windows."""
    windows = np.asarray(windows, dtype=float)
    pool = energy_pool_schema(windows.shape[-1], wavelets)
    rows = [energy_features(w, pool)[0] for w in windows]
    schema = [f"phase{p}.{w}.Ed{l}" for p, w, l in pool]
    return np.array(rows), schema


def extract_feature_matrix(windows, mode: str, *, feature_set=None,
                           params: TimeFeatureParams | None = None,
                           wavelet_spec: WaveletSpec | None = None,
                           energy_selection=None):
    """Batch feature extraction.

    Returns (X, schema, kept) where `kept` indexes the windows that
    produced finite features; offending windows are dropped with a
    warning naming the record.
    """
    windows = np.asarray(windows, dtype=float)
    if windows.ndim != 3 or windows.shape[1] != 3:
        raise ValueError("windows must have shape (n, 3, n_c)")
    params = params or TimeFeatureParams()

    def one(w):
        if mode == "time":
            if feature_set is None or len(feature_set) != 3:
                raise ValueError("time mode needs a 3-feature set")
            return time_features(w, feature_set, params)
        if mode == "coeffs":
            if wavelet_spec is None:
                raise ValueError("coeffs mode needs a WaveletSpec")
            return coeff_features(w, wavelet_spec)
        if mode == "combined":
            if feature_set is None or energy_selection is None:
                raise ValueError("combined mode needs feature_set and energy_selection")
            tv, ts = time_features(w, feature_set, params)
            ev, es = energy_features(w, energy_selection)
            return np.concatenate([tv, ev]), ts + es
        raise ValueError(f"unknown mode {mode!r}")

    rows, kept, schema = [], [], None
    for i, w in enumerate(windows):
        vals, sch = one(w)
        if schema is None:
            schema = sch
        if not np.all(np.isfinite(vals)):
            warnings.warn(f"window {i}: non-finite feature, record dropped")
            continue
        rows.append(vals)
        kept.append(i)
    X = np.array(rows) if rows else np.empty((0, len(schema or [])))
    return X, list(schema or []), np.array(kept, dtype=int)


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------

def save_matrix_text(path, X, schema):
    X = np.asarray(X, dtype=float)
    lines = ["\t".join(schema)]
    for row in X:
        lines.append("\t".join("%.17g" % v for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_matrix_text(path):
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        schema = header.split("\t") if header else []
        rows = [list(map(float, line.split("\t"))) for line in fh if line.strip()]
    X = np.array(rows) if rows else np.empty((0, len(schema)))
    return X, schema


def save_matrix_binary(path, X, schema):
    """64-byte header + row-major little-endian float64 + schema text."""
    X = np.ascontiguousarray(X, dtype="<f8")
    blob = "\n".join(schema).encode()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MATRIX_MAGIC, MATRIX_VERSION, X.shape[0], X.shape[1], len(blob)))
        fh.write(X.tobytes())
        fh.write(blob)


def load_matrix_binary(path):
    with open(path, "rb") as fh:
        magic, version, rows, cols, nschema = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != MATRIX_MAGIC:
            raise ValueError(f"{path}: not a parguard matrix file")
        if version != MATRIX_VERSION:
            raise ValueError(f"{path}: unsupported matrix version {version}")
        X = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8").reshape(rows, cols)
        schema = fh.read(nschema).decode().split("\n") if nschema else []
    return X.copy(), schema
