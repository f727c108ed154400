"""Signal reconstruction sweeps: GD-regularised shallow networks vs. a DST baseline.

Two regularisation strategies, both with the step size ``alpha = s_0^-2``:

``vary_q``
    fixed scale ``sigma`` (default ``M``), ``q = (s_0 / s_K)^2`` iterations.
``vary_sigma``
    fixed ``q`` (default 100), scale ``sigma = K``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..activations import ActivationSpec
from ..calculus import iterations_for_K
from ..design import Grid1D, build
from ..shrinkage import ShrinkagePolicy, fitted
from ..spectral import decompose, dst_mode
from ..trainer import TrainerConfig, train
from .signals import resolve

PSNR_CAP_DB = 300.0

# an "improvement trend" needs a slope above this (dB per doubling of K) ...
TREND_MIN_SLOPE_DB = 0.5
# ... that is also statistically significant (two-sided OLS slope test)
TREND_MAX_PVALUE = 0.05


@dataclass(frozen=True)
class ReconstructionResult:
    K: int
    psnr_db: float
    strategy: str
    activation: str
    baseline_psnr_db: float
    sigma: float
    q: float

    CSV_HEADER = ("strategy", "activation", "K", "sigma", "q", "psnr_db", "baseline_psnr_db")

    def csv_row(self):
        return (self.strategy, self.activation, self.K, self.sigma, self.q,
                self.psnr_db, self.baseline_psnr_db)


def psnr(y, y_hat, peak: float = 1.0) -> float:
    """``10 log10(peak^2 / MSE)``; identical signals give ``PSNR_CAP_DB``."""
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if y.shape != y_hat.shape:
        raise ValueError(f"length mismatch {y.shape} vs {y_hat.shape}")
    mse = float(np.mean((y - y_hat) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, 10.0 * math.log10(peak * peak / mse))


def dst_basis(x, K: int) -> np.ndarray:
    return np.stack([dst_mode(x, k) for k in range(K)], axis=1)


def dst_baseline(y, K: int, x=None, peak: float = 1.0):
    """Least-squares fit of ``y`` on the first ``K`` modes ``sin(pi (k+1/2) x)``.

    ``x`` defaults to the cell-centred grid.  Returns ``(reconstruction, psnr)``.
    """
    y = np.asarray(y, dtype=float)
    if not 1 <= K <= y.size:
        raise ValueError(f"K must be in [1, {y.size}]")
    if x is None:
        x = (np.arange(y.size) + 0.5) / y.size
    basis = dst_basis(x, K)
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    rec = basis @ coef
    return rec, psnr(y, rec, peak)


def psnr_trend(Ks, values):
    """OLS slope of PSNR against ``log2 K`` (dB per doubling) and its p-value."""
    res = stats.linregress(np.log2(np.asarray(Ks, dtype=float)), np.asarray(values, float))
    return float(res.slope), float(res.pvalue)


def has_improvement_trend(Ks, values) -> bool:
    slope, p = psnr_trend(Ks, values)
    return slope > TREND_MIN_SLOPE_DB and p < TREND_MAX_PVALUE


def _fit(a_grid, y, sd, alpha, q, cfg):
    if cfg.engine == "train":
        iters = int(math.ceil(q))
        if iters > cfg.max_train_iters:
            raise ValueError(
                f"explicit GD needs {iters} iterations (> max_train_iters={cfg.max_train_iters})"
            )
        res = train(a_grid, y, TrainerConfig(alpha, iters))
        return a_grid.a @ res.w
    return fitted(sd, ShrinkagePolicy.gd_flow(alpha, q), y)


def _point(task):
    strategy, act, K, x, y, cfg, cache = task
    if strategy == "vary_q":
        sigma = cfg.fixed_sigma
    else:
        sigma = float(K)
    key = (act, sigma)
    if key in cache:
        dm, sd = cache[key]
    else:
        grid = Grid1D(x, np.linspace(0.0, 1.0, cfg.m))
        dm = build(grid, ActivationSpec(act, sigma))
        sd = decompose(dm)
    if K >= sd.s.size:
        raise ValueError(f"K={K} exceeds the rank bound {sd.s.size}")
    alpha = 1.0 / sd.s[0] ** 2
    q = iterations_for_K(sd, K) if strategy == "vary_q" else cfg.q_fixed
    y_hat = _fit(dm, y, sd, alpha, q, cfg)
    return strategy, act, K, sigma, q, psnr(y, y_hat)


def reconstruct_sweep(cfg, signal=None):
    """Run every (strategy, activation, K) point of ``cfg``.

    ``signal`` overrides the configured source with a ``(x, y)`` pair.
    Results are ordered by strategy, activation, then K.
    """
    x, y = signal if signal is not None else resolve(cfg.signal_source())
    baseline = {K: dst_baseline(y, K, x)[1] for K in cfg.k_values}

    # vary_q reuses one SVD per activation
    cache = {}
    if "vary_q" in cfg.strategies:
        grid = Grid1D(x, np.linspace(0.0, 1.0, cfg.m))
        for act in cfg.activations:
            dm = build(grid, ActivationSpec(act, cfg.fixed_sigma))
            cache[(act, cfg.fixed_sigma)] = (dm, decompose(dm))

    tasks = [
        (strategy, act, int(K), x, y, cfg, cache if strategy == "vary_q" else {})
        for strategy in cfg.strategies
        for act in cfg.activations
        for K in cfg.k_values
    ]
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            points = list(pool.map(_point, tasks))
    else:
        points = [_point(t) for t in tasks]
    return [
        ReconstructionResult(K, p, strategy, act, baseline[K], sigma, q)
        for strategy, act, K, sigma, q, p in points
    ]
