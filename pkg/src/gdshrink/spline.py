"""Finite-difference spline penalty and its shallow-network reformulation.

``nabla`` is the square "same"-convolution matrix of the two-tap filter
``[dx, -dx]`` with ``dx = T / M``: row ``i`` computes ``dx (f[i] - f[i-1])`` and
row 0 keeps only ``dx f[0]``.  It is lower bidiagonal, hence invertible, and
the columns of ``nabla^-r`` are discrete versions of ``x^(r-1) [x > b_m]``.

The penalised fit

    argmin_f 1/2 ||y - D f||^2 + lam/2 ||nabla^r f||^2

is the same problem as the ridge regression

    argmin_w 1/2 ||y - D nabla^-r w||^2 + lam/2 ||w||^2,   f = nabla^-r w,

and :func:`spline_objective_equivalence_check` solves both independently.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from .activations import ActivationSpec, evaluate

_MAX_COND = 1e14


@dataclass(frozen=True)
class FiniteDifferenceMatrix:
    nabla: np.ndarray
    r: int
    dx: float
    T: float = 1.0
    mode: str = "same"

    @property
    def m(self) -> int:
        return self.nabla.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return _inverse(self.m, self.r, self.T)


def _first_order(m: int, T: float) -> np.ndarray:
    dx = T / m
    return dx * (np.eye(m) - np.eye(m, k=-1))


def build_nabla(m: int, r: int, T: float = 1.0) -> FiniteDifferenceMatrix:
    """r-th order difference matrix ``(nabla_1)^r`` on ``m`` samples of ``[0, T]``."""
    if m < 4:
        raise ValueError("need m >= 4")
    if r not in (1, 2, 3):
        raise ValueError("only r in {1, 2, 3} is supported")
    nab = np.linalg.matrix_power(_first_order(m, T), r)
    # scale-free condition: the dx**r factor is a pure rescaling
    cond = np.linalg.cond(nab / (T / m) ** r)
    if not np.isfinite(cond) or cond > _MAX_COND:
        raise np.linalg.LinAlgError(f"difference matrix is singular (cond={cond:.3g})")
    nab.setflags(write=False)
    return FiniteDifferenceMatrix(nab, r, T / m, T)


@functools.lru_cache(maxsize=32)
def _inverse(m: int, r: int, T: float) -> np.ndarray:
    nab = np.linalg.matrix_power(_first_order(m, T), r)
    inv = sla.solve_triangular(nab, np.eye(m), lower=True)
    inv.setflags(write=False)
    return inv


def sample_coords(m: int, T: float = 1.0) -> np.ndarray:
    """Cell-centre coordinates ``(i + 1/2) T / m`` of sample ``i``.

    A column read as the step function ``x -> column[floor(x m / T)]`` is
    compared against the analytic activation by midpoint quadrature, i.e. at
    these coordinates.
    """
    return (np.arange(m) + 0.5) * T / m


def inverse_columns(fd: FiniteDifferenceMatrix, indices):
    """Columns of ``nabla^-r`` at ``indices``, shape ``(M, len(indices))``."""
    idx = np.atleast_1d(np.asarray(indices, dtype=int))
    if np.any((idx < 0) | (idx >= fd.m)):
        raise IndexError("column index out of range")
    return np.array(fd.inverse[:, idx])


_ANALYTIC = {1: "heaviside", 2: "relu", 3: "relu2"}


def analytic_column(fd: FiniteDifferenceMatrix, m_index: int) -> np.ndarray:
    """``max(x - b_m, 0)^(r-1)`` (Heaviside for r=1) on :func:`sample_coords`,
    with ``b_m = m T / M``."""
    x = sample_coords(fd.m, fd.T)
    b = m_index * fd.T / fd.m
    return evaluate(ActivationSpec(_ANALYTIC[fd.r]), x - b)


def column_shape_error(fd: FiniteDifferenceMatrix, m_index: int, trim: float = 0.05) -> float:
    """Relative L2 error between column ``m_index`` of ``nabla^-r`` and the
    analytic activation, after a least-squares scale fit, ignoring ``trim`` of
    the samples at each boundary."""
    col = inverse_columns(fd, [m_index])[:, 0]
    ref = analytic_column(fd, m_index)
    cut = int(np.floor(trim * fd.m))
    sl = slice(cut, fd.m - cut)
    c, h = col[sl], ref[sl]
    scale = (c @ h) / (c @ c)
    return float(np.linalg.norm(scale * c - h) / np.linalg.norm(h))


def selector(indices, m: int) -> np.ndarray:
    """``N x M`` matrix of indicator rows picking grid samples."""
    idx = np.asarray(indices, dtype=int)
    if idx.ndim != 1 or np.any((idx < 0) | (idx >= m)):
        raise ValueError("dataset indices must lie on the M-grid")
    d = np.zeros((idx.size, m))
    d[np.arange(idx.size), idx] = 1.0
    return d


def fit_spline(fd: FiniteDifferenceMatrix, indices, y, lam: float) -> np.ndarray:
    """Penalised fit in function space.

    Unobserved samples are eliminated exactly: for fixed observed values they
    minimise the penalty, leaving an ``N x N`` ridge problem in the observed
    values.  This avoids forming ``D^T D + lam nabla^T nabla``, whose
    conditioning collapses for ``r = 3``.
    """
    idx = np.asarray(indices, dtype=int)
    y = np.asarray(y, dtype=float)
    if np.unique(idx).size != idx.size:
        raise ValueError("duplicate dataset indices")
    obs = np.zeros(fd.m, dtype=bool)
    obs[idx] = True
    L = fd.nabla
    lo, lu = L[:, idx], L[:, ~obs]
    k = lu.shape[1]
    if k:
        q, rr = np.linalg.qr(lu, mode="complete")
        c = q[:, k:].T @ lo
    else:
        c = lo
    # (I + lam C^T C) f_obs = y
    _, sv, vt = np.linalg.svd(c, full_matrices=False)
    proj = vt @ y
    f_obs = y - vt.T @ proj + vt.T @ (proj / (1.0 + lam * sv**2))
    f = np.empty(fd.m)
    f[idx] = f_obs
    if k:
        f[~obs] = sla.solve_triangular(rr[:k], -(q[:, :k].T @ (lo @ f_obs)))
    return f


def fit_network(fd: FiniteDifferenceMatrix, indices, y, lam: float):
    """Ridge regression on the weights of ``f = nabla^-r w``; returns ``(f, w)``."""
    basis = selector(indices, fd.m) @ fd.inverse
    u, s, vt = np.linalg.svd(basis, full_matrices=False)
    w = vt.T @ (s / (s**2 + lam) * (u.T @ np.asarray(y, dtype=float)))
    return fd.inverse @ w, w


class EquivalenceReport(NamedTuple):
    m: int
    r: int
    lam: float
    rel_discrepancy: float
    f_spline: np.ndarray
    f_network: np.ndarray


def spline_objective_equivalence_check(m: int, r: int, lam: float, dataset, T: float = 1.0):
    """Solve the spline and the network formulation and compare the fits.

    ``dataset`` is ``(indices, y)`` with integer grid indices; off-grid data
    raises ``ValueError``.
    """
    indices, y = dataset
    indices = np.asarray(indices)
    if not np.all(np.equal(np.mod(indices, 1), 0)):
        raise ValueError("dataset coordinates must lie on the M-grid")
    indices = indices.astype(int)
    fd = build_nabla(m, r, T)
    selector(indices, m)
    fa = fit_spline(fd, indices, y, lam)
    fb, _ = fit_network(fd, indices, y, lam)
    denom = np.linalg.norm(fa)
    rel = float(np.linalg.norm(fa - fb) / denom) if denom > 0 else float(np.linalg.norm(fb))
    return EquivalenceReport(m, r, float(lam), rel, fa, fb)


def grid_indices(coords, m: int, T: float = 1.0, tol: float = 1e-9) -> np.ndarray:
    """Map coordinates ``x = i T / m`` to their integer indices, rejecting off-grid points."""
    pos = np.asarray(coords, dtype=float) * m / T
    idx = np.round(pos)
    if np.any(np.abs(pos - idx) > tol) or np.any((idx < 0) | (idx >= m)):
        raise ValueError("dataset coordinates must lie on the M-grid")
    return idx.astype(int)
