"""Wavelet filter bank catalog.

The coefficients ship as a versioned JSON data file generated offline by
scripts/gen_filter_catalog.py.  Six families are included: Daubechies
db1-db10, Symlets sym2-sym10, Coiflets coif1-coif5, Biorthogonal and
ReverseBiorthogonal {1.1, 1.3, 2.2, 3.3, 4.4, 6.8}, and the 62-tap
discrete Meyer filter.

Filter semantics: ``dec_lo``/``dec_hi`` are applied by periodized
convolution sampled at odd phase (see dwt.py); ``rec_lo``/``rec_hi`` are
applied in the adjoint (transpose) indexing of the same pattern.  For
orthogonal banks the reconstruction filters equal the decomposition
filters; biorthogonal banks carry a genuine dual pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

FAMILIES = (
    "Daubechies",
    "Symlets",
    "Coiflets",
    "Biorthogonal",
    "ReverseBiorthogonal",
    "DiscreteMeyer",
)

_DATA_FILE = "wavelet_filters_v1.json"


@dataclass(frozen=True)
class FilterBank:
    name: str
    family: str
    orthogonal: bool
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray
    effective_length: int

    def __post_init__(self):
        for arr in (self.dec_lo, self.dec_hi, self.rec_lo, self.rec_hi):
            arr.setflags(write=False)


@dataclass(frozen=True)
class WaveletSpec:
    """A (wavelet function, decomposition level) choice."""

    wavelet: str
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"decomposition level must be >= 1, got {self.level}")
        bank = get_bank(self.wavelet)  # raises for unknown names
        if bank.orthogonal:
            s = bank.dec_lo.sum()
            if abs(s - math.sqrt(2.0)) > 1e-10:
                raise ValueError(f"{self.wavelet}: lowpass sum {s} != sqrt(2)")

    @property
    def bank(self) -> FilterBank:
        return get_bank(self.wavelet)

    def __str__(self):
        return f"{self.wavelet}@{self.level}"

    @classmethod
    def parse(cls, text: str) -> "WaveletSpec":
        """Parse 'db4@4' style strings."""
        name, _, lvl = text.partition("@")
        if not lvl:
            raise ValueError(f"expected '<wavelet>@<level>', got {text!r}")
        return cls(name, int(lvl))


@lru_cache(maxsize=1)
def _raw_catalog() -> dict:
    path = resources.files("parguard.features") / "data" / _DATA_FILE
    return json.loads(path.read_text())


def catalog_version() -> int:
    return _raw_catalog()["version"]


@lru_cache(maxsize=1)
def load_catalog() -> dict[str, FilterBank]:
    """All shipped filter banks, keyed by name (db4, bior2.2, ...)."""
    out = {}
    for name, w in _raw_catalog()["wavelets"].items():
        out[name] = FilterBank(
            name=name,
            family=w["family"],
            orthogonal=w["orthogonal"],
            dec_lo=np.asarray(w["dec_lo"], dtype=float),
            dec_hi=np.asarray(w["dec_hi"], dtype=float),
            rec_lo=np.asarray(w["rec_lo"], dtype=float),
            rec_hi=np.asarray(w["rec_hi"], dtype=float),
            effective_length=w["effective_length"],
        )
    return out


def get_bank(name: str) -> FilterBank:
    cat = load_catalog()
    if name not in cat:
        raise KeyError(f"unknown wavelet {name!r}; shipped: {sorted(cat)}")
    return cat[name]
