"""Deterministic CSV output and run manifests."""

from __future__ import annotations

import csv
import hashlib
import json
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows with ``repr`` floats (round-trip exact) and ``\\n`` line ends."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return path


def read_csv(path):
    """Read a CSV written by :func:`write_csv` into ``(header, rows)`` of strings."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, os.PathLike):
        return os.fspath(v)
    return v


def write_manifest(out_dir, command: str, params: dict, seed: int, artifacts) -> Path:
    """``manifest.json`` with resolved parameters and checksums of ``artifacts``.

    Paths are stored relative to ``out_dir`` and sorted, so the manifest
    itself is byte-stable across identical runs.
    """
    out_dir = Path(out_dir)
    sums = {
        os.path.relpath(p, out_dir): sha256(p) for p in sorted(map(str, artifacts))
    }
    doc = {
        "command": command,
        "params": _jsonable(params),
        "seed": seed,
        "artifacts": dict(sorted(sums.items())),
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
