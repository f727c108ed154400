"""Plain full-batch gradient descent on ``E(w) = 1/2 ||y - A w||^2``.

Serves as the ground truth the closed-form GD masks are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .design import as_matrix

# abort when the residual grows by more than this factor over this many steps
DIVERGENCE_FACTOR = 10.0
DIVERGENCE_WINDOW = 10


class DivergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainerConfig:
    alpha: float
    q: int
    w0: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if int(self.q) != self.q or self.q < 1:
            raise ValueError("q must be a positive integer")
        object.__setattr__(self, "q", int(self.q))


class TrainResult(NamedTuple):
    w: np.ndarray
    residuals: np.ndarray


def _check(a: np.ndarray, y: np.ndarray, w: np.ndarray):
    if y.shape != (a.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({a.shape[0]},)")
    if w.shape != (a.shape[1],):
        raise ValueError(f"w has shape {w.shape}, expected ({a.shape[1]},)")


def step(dm, y, w, alpha: float) -> np.ndarray:
    """One update ``w + alpha A^T (y - A w)``."""
    a = as_matrix(dm)
    y = np.asarray(y, dtype=float)
    w = np.asarray(w, dtype=float)
    _check(a, y, w)
    return w + alpha * (a.T @ (y - a @ w))


def train(dm, y, cfg: TrainerConfig) -> TrainResult:
    """Run ``cfg.q`` GD steps from ``cfg.w0`` (zeros by default).

    ``residuals[k]`` is ``||y - A w_k||`` for the iterate *before* step ``k``,
    so ``residuals[0]`` belongs to ``w0``.  Raises :class:`DivergenceError` when
    the residual grows more than tenfold within any ten steps.
    """
    a = as_matrix(dm)
    y = np.asarray(y, dtype=float)
    w = np.zeros(a.shape[1]) if cfg.w0 is None else np.array(cfg.w0, dtype=float)
    _check(a, y, w)
    at = np.ascontiguousarray(a.T)
    hist = np.empty(cfg.q)
    for k in range(cfg.q):
        r = y - a @ w
        hist[k] = np.linalg.norm(r)
        if not np.isfinite(hist[k]) or (
            k >= DIVERGENCE_WINDOW
            and hist[k] > DIVERGENCE_FACTOR * hist[k - DIVERGENCE_WINDOW]
        ):
            raise DivergenceError(
                f"residual grew from {hist[max(k - DIVERGENCE_WINDOW, 0)]:.3g} "
                f"to {hist[k]:.3g} by step {k}; reduce alpha"
            )
        w = w + cfg.alpha * (at @ r)
    return TrainResult(w, hist)
