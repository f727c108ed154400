"""Thin SVD of design matrices, normalised spectra and principal components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import as_matrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """``A = u @ diag(s) @ v.T`` with ``s`` descending, ``R = min(N, M)``.

    Each left singular vector is sign-fixed so that its first entry of
    non-negligible magnitude is positive; ``v`` is flipped along with it.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def rank_bound(self) -> int:
        return self.s.size

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.v.T


def _fix_signs(u: np.ndarray, v: np.ndarray):
    # "first nonzero" with a relative floor: exact zeros come back as ~1e-17 noise
    mag = np.abs(u)
    floor = 1e-8 * mag.max(axis=0, keepdims=True)
    first = np.argmax(mag > floor, axis=0)
    signs = np.sign(u[first, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, v * signs


def decompose(dm) -> SpectralDecomposition:
    """Thin SVD of a :class:`~gdshrink.design.DesignMatrix` (or a 2D array).

    ``numpy.linalg.LinAlgError`` propagates if LAPACK does not converge.
    """
    a = as_matrix(dm)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    u, v = _fix_signs(u, vt.T)
    for arr in (u, s, v):
        arr.setflags(write=False)
    return SpectralDecomposition(u, s, v)


def normalized_spectrum(sd) -> np.ndarray:
    """``s / s[0]``; accepts a decomposition or a raw singular-value vector."""
    s = sd.s if isinstance(sd, SpectralDecomposition) else np.asarray(sd, float)
    if s[0] <= 0:
        return np.zeros_like(s)
    return s / s[0]


def principal_component_function(sd: SpectralDecomposition, k: int, grid):
    """k-th left singular vector as a sampled function ``(x, u_k(x))``."""
    if not 0 <= k < sd.u.shape[1]:
        raise IndexError(f"component {k} out of range [0, {sd.u.shape[1]})")
    x = np.asarray(grid.x if hasattr(grid, "x") else grid, dtype=float)
    if x.size != sd.u.shape[0]:
        raise ValueError("grid size does not match the number of rows")
    return x, np.array(sd.u[:, k])


def dst_mode(x, k: int) -> np.ndarray:
    """DST-style basis function ``sin(pi (k + 1/2) x)``."""
    return np.sin(np.pi * (k + 0.5) * np.asarray(x, dtype=float))


def dst_correlation(component, k: int, x=None) -> float:
    """Absolute normalised inner product of ``component`` with ``dst_mode(x, k)``.

    ``x`` defaults to ``N`` equally spaced points on ``[0, 1]``.
    """
    c = np.asarray(component, dtype=float)
    if x is None:
        x = np.linspace(0.0, 1.0, c.size)
    d = dst_mode(x, k)
    denom = np.linalg.norm(c) * np.linalg.norm(d)
    if denom == 0:
        return 0.0
    return float(min(1.0, abs(c @ d) / denom))


def knee_buffer(sd, K: int, floor: float = 0.1) -> int:
    """Smallest ``b >= 0`` with ``normalized[k] <= floor`` for every ``k > K + b``.

    Measures how far past index ``K`` a sharp spectral knee (as produced
    by a scaled sinc) takes to fall below ``floor``.
    """
    ns = normalized_spectrum(sd)
    above = np.flatnonzero(ns > floor)
    if above.size == 0:
        return 0
    return max(0, int(above[-1]) - int(K))
