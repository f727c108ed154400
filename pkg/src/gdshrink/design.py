"""Design matrix ``A = [eta(sigma (x_i - b_j))]`` of a 1D shallow network.

``A`` is the transposed Jacobian of ``f(x) = sum_j w_j eta(x - b_j)`` with
respect to the weights, so ``f(x) = A @ w`` on the sample coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import ActivationSpec, evaluate


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Grid1D:
    """Sample coordinates ``x`` (N) and biases ``b`` (M) on ``[0, T]``."""

    x: np.ndarray
    b: np.ndarray
    T: float = 1.0

    def __post_init__(self):
        x = _frozen(self.x).ravel()
        b = _frozen(self.b).ravel()
        T = float(self.T)
        if T <= 0 or not np.isfinite(T):
            raise ValueError("T must be positive")
        for name, v in (("x", x), ("b", b)):
            if v.size == 0:
                raise ValueError(f"{name} is empty")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} has non-finite entries")
            if np.any(np.diff(v) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            tol = 1e-12 * T
            if v[0] < -tol or v[-1] > T + tol:
                raise ValueError(f"{name} must lie in [0, {T}]")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "T", T)

    @classmethod
    def uniform(cls, n: int, m: int, T: float = 1.0) -> "Grid1D":
        """N and M equally spaced values spanning ``[0, T]`` (endpoints included)."""
        if n < 1 or m < 1:
            raise ValueError("n and m must be >= 1")
        return cls(np.linspace(0.0, T, n), np.linspace(0.0, T, m), T)

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def m(self) -> int:
        return self.b.size


@dataclass(frozen=True)
class DesignMatrix:
    a: np.ndarray
    grid: Grid1D
    activation: ActivationSpec

    @property
    def shape(self):
        return self.a.shape


def _lattice_offsets(grid: Grid1D) -> np.ndarray:
    """Integer lattice offsets ``i - j`` for impulse matrices.

    Raises if ``x`` and ``b`` are not subsets of one uniform lattice.
    """
    both = np.unique(np.concatenate([grid.x, grid.b]))
    if both.size == 1:
        h = 1.0
    else:
        h = np.min(np.diff(both))
    tol = 1e-9
    xi = (grid.x - both[0]) / h
    bj = (grid.b - both[0]) / h
    if np.max(np.abs(xi - np.round(xi)), initial=0) > tol or \
            np.max(np.abs(bj - np.round(bj)), initial=0) > tol:
        raise ValueError(
            "impulse activation needs x and b on a common uniform grid"
        )
    return np.round(xi)[:, None] - np.round(bj)[None, :]


def build(grid: Grid1D, activation: ActivationSpec) -> DesignMatrix:
    """Dense ``N x M`` design matrix; row ``i`` is the feature vector at ``x_i``."""
    if activation.kind == "impulse":
        a = (_lattice_offsets(grid) == 0).astype(float)
    else:
        a = evaluate(activation, grid.x[:, None] - grid.b[None, :])
        a = np.array(a, dtype=float, ndmin=2)
    if not np.all(np.isfinite(a)):
        raise FloatingPointError("design matrix has non-finite entries")
    a.setflags(write=False)
    return DesignMatrix(a, grid, activation)


def predict(dm: DesignMatrix, w) -> np.ndarray:
    """Network output ``A @ w`` at the sample coordinates."""
    w = np.asarray(w, dtype=float)
    if w.shape != (dm.a.shape[1],):
        raise ValueError(f"w has shape {w.shape}, expected ({dm.a.shape[1]},)")
    return dm.a @ w


def as_matrix(dm) -> np.ndarray:
    """Accept a :class:`DesignMatrix` (anything with ``.a``) or a 2D array."""
    a = np.asarray(getattr(dm, "a", dm), dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2D matrix")
    return a
