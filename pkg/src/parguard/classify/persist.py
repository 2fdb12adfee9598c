"""Versioned binary model persistence with a text summary sidecar.

Layout: 64-byte header (magic, version, kind tag, metadata length),
JSON metadata blob, then a sequence of named float/int arrays.  All
writes are byte-deterministic (no timestamps, sorted keys).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MODEL_MAGIC = b"PGMODEL\0"
MODEL_VERSION = 1
_HEADER = struct.Struct("<8sI8sQ36x")  # magic, version, kind, meta bytes
assert _HEADER.size == 64

_KIND_CLASSES = None


def _registry():
    global _KIND_CLASSES
    if _KIND_CLASSES is None:
        from .tree import DecisionTree
        from .forest import RandomForest
        from .boosting import GradientBoosting
        from .neighbors import KNearestNeighbors
        from .bayes import GaussianNaiveBayes
        from .mlp import MLP

        _KIND_CLASSES = {c.kind: c for c in
                         (DecisionTree, RandomForest, GradientBoosting,
                          KNearestNeighbors, GaussianNaiveBayes, MLP)}
    return _KIND_CLASSES


def save_model(model, path, extra_meta=None):
    """Write the model blob and a .txt sidecar next to it."""
    path = Path(path)
    meta, arrays = model._state()
    if extra_meta:
        meta = {**meta, "extra": extra_meta}
    meta_blob = json.dumps(meta, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MODEL_MAGIC, MODEL_VERSION,
                              model.kind.encode().ljust(8, b"\0"), len(meta_blob)))
        fh.write(meta_blob)
        for name in sorted(arrays):
            arr = np.ascontiguousarray(arrays[name])
            code = {"f8": b"f", "i4": b"i", "i8": b"l"}[arr.dtype.str[1:]]
            name_b = name.encode()
            fh.write(struct.pack("<H", len(name_b)))
            fh.write(name_b)
            fh.write(code)
            fh.write(struct.pack("<B", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
            fh.write(arr.astype({b"f": "<f8", b"i": "<i4", b"l": "<i8"}[code]).tobytes())
    sidecar = path.with_suffix(path.suffix + ".txt")
    lines = [f"parguard model kind={model.kind} format_version={MODEL_VERSION}"]
    for k in sorted(meta):
        if k != "extra":
            lines.append(f"  {k} = {meta[k]}")
    if extra_meta:
        for k in sorted(extra_meta):
            lines.append(f"  extra.{k} = {extra_meta[k]}")
    lines.append(f"  arrays = {len(arrays)}")
    sidecar.write_text("\n".join(lines) + "\n")


def load_model(path):
    path = Path(path)
    with open(path, "rb") as fh:
        magic, version, kind_b, meta_len = _HEADER.unpack(fh.read(_HEADER.size))
        if magic != MODEL_MAGIC:
            raise ValueError(f"{path}: not a parguard model file")
        if version != MODEL_VERSION:
            raise ValueError(f"{path}: unsupported model format version {version}")
        kind = kind_b.rstrip(b"\0").decode()
        meta = json.loads(fh.read(meta_len))
        arrays = {}
        while True:
            raw = fh.read(2)
            if not raw:
                break
            (name_len,) = struct.unpack("<H", raw)
            name = fh.read(name_len).decode()
            code = fh.read(1)
            (ndim,) = struct.unpack("<B", fh.read(1))
            shape = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim)) if ndim else ()
            dtype = {b"f": "<f8", b"i": "<i4", b"l": "<i8"}[code]
            count = int(np.prod(shape)) if shape else 1
            arr = np.frombuffer(fh.read(count * np.dtype(dtype).itemsize), dtype=dtype)
            arrays[name] = arr.reshape(shape).copy()
    cls = _registry()[kind]
    meta.pop("extra", None)
    return cls._from_state(meta, arrays)
