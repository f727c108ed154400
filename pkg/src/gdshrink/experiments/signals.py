"""Signal sources for the reconstruction experiments.

A resolved signal is ``N`` samples on the cell-centred grid
``x_i = (i + 1/2) / N`` of ``[0, 1]``, min-max rescaled to ``[0, 1]``.  On that
grid the first ``N`` modes ``sin(pi (k + 1/2) x)`` form an orthogonal (DST-IV)
basis, so the DST baseline is exact at ``K = N``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

# default synthetic test signal: octave-spaced sinusoids with 1/f amplitudes
DEFAULT_FREQUENCIES = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
DEFAULT_N = 256


@dataclass(frozen=True)
class SynthSpec:
    """``y(x) = sum_i a_i sin(2 pi f_i x)``; ``f`` in cycles per unit length.

    Amplitudes default to ``1 / f``.
    """

    frequencies: Tuple[float, ...] = DEFAULT_FREQUENCIES
    amplitudes: Optional[Tuple[float, ...]] = None
    n: int = DEFAULT_N

    def resolved_amplitudes(self) -> Tuple[float, ...]:
        if self.amplitudes is None:
            return tuple(1.0 / f for f in self.frequencies)
        if len(self.amplitudes) != len(self.frequencies):
            raise ValueError("need one amplitude per frequency")
        return tuple(self.amplitudes)


@dataclass(frozen=True)
class SignalSource:
    kind: str = "synthetic"  # csv_vector | pgm_row | synthetic
    path: Optional[str] = None
    row_index: int = 100
    synth: SynthSpec = field(default_factory=SynthSpec)

    @classmethod
    def from_string(cls, spec: str, row_index: int = 100, synth: Optional[SynthSpec] = None):
        """``"synthetic"`` or a path ending in ``.pgm``/``.csv``."""
        synth = synth or SynthSpec()
        if spec == "synthetic":
            return cls("synthetic", synth=synth)
        suffix = Path(spec).suffix.lower()
        if suffix in (".pgm", ".pnm"):
            return cls("pgm_row", spec, row_index, synth)
        if suffix in (".csv", ".txt"):
            return cls("csv_vector", spec, row_index, synth)
        raise ValueError(f"cannot infer signal kind from {spec!r}")


def sample_grid(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def normalize(y) -> np.ndarray:
    """Min-max rescale to ``[0, 1]``; a constant signal maps to zeros."""
    y = np.asarray(y, dtype=float)
    lo, hi = y.min(), y.max()
    if hi == lo:
        return np.zeros_like(y)
    return (y - lo) / (hi - lo)


def synthesize(spec: SynthSpec) -> np.ndarray:
    x = sample_grid(spec.n)
    amps = spec.resolved_amplitudes()
    y = np.zeros(spec.n)
    for f, a in zip(spec.frequencies, amps):
        y += a * np.sin(2.0 * np.pi * f * x)
    return y


def _pgm_tokens(data: bytes):
    """Yield header tokens, skipping comments; returns the offset after maxval."""
    tokens = []
    i = 0
    while len(tokens) < 4:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if data[i : i + 1] == b"#":
            while i < len(data) and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        j = i
        while j < len(data) and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise ValueError("truncated PGM header")
        tokens.append(data[i:j])
        i = j
    return tokens, i + 1  # single whitespace after maxval


def read_pgm(path) -> np.ndarray:
    """Read a plain (P2) or binary (P5) PGM into a 2D float array."""
    data = Path(path).read_bytes()
    tokens, offset = _pgm_tokens(data)
    magic = tokens[0]
    width, height, maxval = (int(t) for t in tokens[1:4])
    if magic == b"P5":
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        count = width * height
        raw = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
        return raw.reshape(height, width).astype(float)
    if magic == b"P2":
        body = b"\n".join(
            line.split(b"#", 1)[0] for line in data[offset - 1 :].splitlines()
        )
        vals = np.array(body.split(), dtype=float)
        if vals.size < width * height:
            raise ValueError("truncated P2 data")
        return vals[: width * height].reshape(height, width)
    raise ValueError(f"unsupported PGM magic {magic!r}")


def read_csv_vector(path) -> np.ndarray:
    """Single-column CSV; a non-numeric first row is treated as a header."""
    vals = []
    with open(path, newline="") as fh:
        for n, row in enumerate(csv.reader(fh)):
            if not row or not row[0].strip():
                continue
            try:
                vals.append(float(row[0]))
            except ValueError:
                if n == 0:
                    continue
                raise
    if not vals:
        raise ValueError(f"{path}: no samples")
    return np.array(vals)


def resolve(source: SignalSource):
    """Return ``(x, y)`` for ``source`` with ``y`` rescaled to ``[0, 1]``."""
    if source.kind == "synthetic":
        raw = synthesize(source.synth)
    elif source.kind == "pgm_row":
        img = read_pgm(source.path)
        if not 0 <= source.row_index < img.shape[0]:
            raise ValueError(f"row {source.row_index} outside image with {img.shape[0]} rows")
        raw = img[source.row_index]
    elif source.kind == "csv_vector":
        raw = read_csv_vector(source.path)
    else:
        raise ValueError(f"unknown signal kind {source.kind!r}")
    if not np.all(np.isfinite(raw)):
        raise ValueError("signal has non-finite samples")
    y = normalize(raw)
    return sample_grid(y.size), y
