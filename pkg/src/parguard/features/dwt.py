"""Multilevel 1-D discrete wavelet transform (pyramid algorithm).

Boundary handling is periodization; odd-length inputs are zero-padded to
even length at each level, which keeps both Parseval (for orthogonal
banks) and perfect reconstruction exact.  The analysis step computes

    a[k] = sum_m dec_lo[m] x[(2k+1-m) mod n]
    d[k] = sum_m dec_hi[m] x[(2k+1-m) mod n]

and synthesis scatters back through the adjoint of the same index
pattern using the reconstruction filters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filters import FilterBank, WaveletSpec, get_bank


def max_useful_level(signal_length: int, filter_length: int) -> int:
    """floor(log2(signal_length / (filter_length - 1))), floored at 0."""
    if filter_length < 2:
        raise ValueError("filter_length must be >= 2")
    if signal_length < 1:
        raise ValueError("signal_length must be >= 1")
    level = 0
    while (filter_length - 1) << (level + 1) <= signal_length:
        level += 1
    return level


def coefficient_lengths(signal_length: int, level: int) -> list[int]:
    """Per-level detail lengths [|d1|, ..., |dL|] under periodization."""
    lengths = []
    n = signal_length
    for _ in range(level):
        n = (n + 1) // 2
        lengths.append(n)
    return lengths


@dataclass
class DwtResult:
    """details[l] holds d_{l+1}; approx is a_L; input_lengths[l] is the
    length fed to level l+1 (needed to trim the zero-pad on inversion)."""

    details: list[np.ndarray]
    approx: np.ndarray
    input_lengths: list[int]

    @property
    def level(self) -> int:
        return len(self.details)

    def energy(self) -> float:
        return float(sum(d @ d for d in self.details) + self.approx @ self.approx)


def _analysis_step(x: np.ndarray, bank: FilterBank):
    n = len(x)
    if n % 2:
        x = np.concatenate([x, [0.0]])
        n += 1
    half = n // 2
    m_lo = np.arange(len(bank.dec_lo))
    m_hi = np.arange(len(bank.dec_hi))
    k = 2 * np.arange(half)[:, None] + 1
    a = (x[(k - m_lo[None, :]) % n] * bank.dec_lo).sum(axis=1)
    d = (x[(k - m_hi[None, :]) % n] * bank.dec_hi).sum(axis=1)
    return a, d


def _synthesis_step(a: np.ndarray, d: np.ndarray, bank: FilterBank, out_length: int):
    n = 2 * len(a)
    x = np.zeros(n)
    m_lo = np.arange(len(bank.rec_lo))
    m_hi = np.arange(len(bank.rec_hi))
    for k in range(len(a)):
        x_idx = (2 * k + 1 - m_lo) % n
        np.add.at(x, x_idx, a[k] * bank.rec_lo)
        x_idx = (2 * k + 1 - m_hi) % n
        np.add.at(x, x_idx, d[k] * bank.rec_hi)
    return x[:out_length]


def dwt_multilevel(x: np.ndarray, spec: WaveletSpec) -> DwtResult:
    """Pyramid decomposition of x down to spec.level."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-D signal")
    bank = get_bank(spec.wavelet)
    limit = max_useful_level(len(x), bank.effective_length)
    if spec.level > limit:
        raise ValueError(
            f"level {spec.level} too deep for length {len(x)} with "
            f"{spec.wavelet} (max useful level {limit})"
        )
    details, input_lengths = [], []
    a = x
    for _ in range(spec.level):
        input_lengths.append(len(a))
        a, d = _analysis_step(a, bank)
        details.append(d)
    return DwtResult(details=details, approx=a, input_lengths=input_lengths)


def idwt_multilevel(res: DwtResult, wavelet: str) -> np.ndarray:
    """Inverse pyramid; exact up to float rounding for all shipped banks."""
    bank = get_bank(wavelet)
    a = res.approx
    for d, out_len in zip(reversed(res.details), reversed(res.input_lengths)):
        a = _synthesis_step(a, d, bank, out_len)
    return a


def wavelet_energy(details: list[np.ndarray]) -> np.ndarray:
    """Per-level energies E_l = sum_k |d_l(k)|^2."""
    return np.array([float(d @ d) for d in details])
