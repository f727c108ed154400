"""Shallow networks on 2D coordinates: ``A = [eta(v_j . x_i - b_j)]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..activations import ActivationSpec, evaluate


@dataclass(frozen=True)
class MultiDimDesign:
    v_matrix: np.ndarray  # M x D
    b: np.ndarray  # M
    init: str  # rank_one | full_rank_random


@dataclass(frozen=True)
class MultiDimMatrix:
    a: np.ndarray
    coords: np.ndarray
    design: MultiDimDesign
    activation: ActivationSpec

    @property
    def shape(self):
        return self.a.shape


def grid_coords(rows: int, cols: int) -> np.ndarray:
    """Integer pixel coordinates ``(x, y) = (column, row)`` in row-major order."""
    yy, xx = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    return np.stack([xx.ravel(), yy.ravel()], axis=1).astype(float)


def rank_one_design(rows: int, cols: int, m: int) -> MultiDimDesign:
    """Every neuron shares ``v = [rows, 1]``, so ``v . (x, y) = rows * x + y``
    is a distinct scalar per pixel; biases are equally spaced over its range."""
    v = np.array([float(rows), 1.0])
    t = grid_coords(rows, cols) @ v
    b = np.linspace(t.min(), t.max(), m)
    return MultiDimDesign(np.tile(v, (m, 1)), b, "rank_one")


def full_rank_design(coords, m: int, seed: int = 0) -> MultiDimDesign:
    """Directions drawn from ``N(0, 1/D)``; bias ``j`` sits at fraction
    ``(j + 1/2) / m`` of neuron ``j``'s projected coordinate range."""
    coords = np.asarray(coords, dtype=float)
    d = coords.shape[1]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((m, d)) / np.sqrt(d)
    t = coords @ v.T
    lo, hi = t.min(axis=0), t.max(axis=0)
    b = lo + (np.arange(m) + 0.5) / m * (hi - lo)
    return MultiDimDesign(v, b, "full_rank_random")


def build_multidim_design(coords, md: MultiDimDesign, activation: ActivationSpec) -> MultiDimMatrix:
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or md.v_matrix.ndim != 2 or coords.shape[1] != md.v_matrix.shape[1]:
        raise ValueError(
            f"coordinates of dim {coords.shape[-1]} do not match V of shape {md.v_matrix.shape}"
        )
    if md.b.shape != (md.v_matrix.shape[0],):
        raise ValueError("need one bias per row of V")
    if not np.all(np.isfinite(coords)):
        raise ValueError("non-finite coordinates")
    a = evaluate(activation, coords @ md.v_matrix.T - md.b[None, :])
    a.setflags(write=False)
    return MultiDimMatrix(a, coords, md, activation)


def axis_variances(component, rows: int, cols: int):
    """Largest variance of a 2D component along ``y`` (within any column) and
    along ``x`` (within any row)."""
    img = np.asarray(component, dtype=float).reshape(rows, cols)
    return float(img.var(axis=0).max()), float(img.var(axis=1).max())
