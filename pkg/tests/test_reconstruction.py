import math

import numpy as np
import pytest

from gdshrink.config import ExperimentConfig
from gdshrink.experiments.reconstruction import (
    PSNR_CAP_DB,
    dst_baseline,
    has_improvement_trend,
    psnr,
    psnr_trend,
    reconstruct_sweep,
)
from gdshrink.experiments.signals import sample_grid
from gdshrink.spectral import dst_mode


class TestPsnr:
    def test_identical(self):
        y = np.linspace(0, 1, 9)
        assert psnr(y, y) == PSNR_CAP_DB

    def test_mse_001(self):
        y = np.zeros(100)
        assert psnr(y, y + 0.1) == pytest.approx(20.0, abs=1e-12)

    def test_peak_255(self):
        y = np.zeros(10)
        assert psnr(y, y + 1.0, peak=255.0) == pytest.approx(48.13, abs=5e-3)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros(3), np.zeros(4))


class TestDstBaseline:
    def test_in_span(self):
        x = sample_grid(128)
        _, p = dst_baseline(dst_mode(x, 3), 4, x)
        assert p >= 200

    def test_out_of_span(self):
        n = 256
        x = sample_grid(n)
        y = dst_mode(x, 3)
        rec, p = dst_baseline(y, 3, x)
        assert np.max(np.abs(rec)) < 1e-10
        assert p == pytest.approx(10 * math.log10(n / (y @ y)), abs=1e-6)

    def test_full_basis_exact(self, rng):
        y = rng.random(256)
        rec, _ = dst_baseline(y, 256)
        assert np.max(np.abs(rec - y)) <= 1e-8

    def test_k_range(self):
        with pytest.raises(ValueError):
            dst_baseline(np.zeros(8), 9)


class TestTrend:
    def test_flat(self):
        Ks = [8, 16, 32, 64, 128]
        assert not has_improvement_trend(Ks, [12.0, 12.0, 12.0, 12.0, 12.0 + 1e-9])

    def test_rising(self):
        Ks = [8, 16, 32, 64, 128]
        assert has_improvement_trend(Ks, [10.0, 14.1, 17.9, 22.0, 26.1])

    def test_slope_units(self):
        slope, _ = psnr_trend([1, 2, 4, 8], [0.0, 3.0, 6.0, 9.0])
        assert slope == pytest.approx(3.0)


def _small_cfg(**kw):
    base = dict(n=128, m=256, k_values=(8, 16, 32), activations=("tanh", "relu", "sinc"))
    base.update(kw)
    return ExperimentConfig(**base)


class TestSweep:
    def test_ordering_and_fields(self):
        cfg = _small_cfg()
        res = reconstruct_sweep(cfg)
        keys = [(r.strategy, r.activation, r.K) for r in res]
        expected = [(s, a, k) for s in cfg.strategies for a in cfg.activations for k in cfg.k_values]
        assert keys == expected
        for r in res:
            if r.strategy == "vary_sigma":
                assert r.sigma == r.K and r.q == 100.0
            else:
                assert r.sigma == cfg.m

    def test_parallel_matches_serial(self):
        a = reconstruct_sweep(_small_cfg(workers=1))
        b = reconstruct_sweep(_small_cfg(workers=4))
        assert a == b

    def test_deterministic(self):
        assert reconstruct_sweep(_small_cfg()) == reconstruct_sweep(_small_cfg())

    def test_train_engine_matches_mask(self):
        # vary_sigma uses q=100, short enough to iterate explicitly
        cfg = _small_cfg(strategies=("vary_sigma",), activations=("sinc", "gaussian"))
        mask = reconstruct_sweep(cfg)
        iterated = reconstruct_sweep(_small_cfg(strategies=("vary_sigma",),
                                                activations=("sinc", "gaussian"), engine="train"))
        for a, b in zip(mask, iterated):
            assert a.psnr_db == pytest.approx(b.psnr_db, abs=0.5)

    def test_train_engine_refuses_huge_q(self):
        cfg = _small_cfg(strategies=("vary_q",), activations=("relu",), engine="train",
                         max_train_iters=1000)
        with pytest.raises(ValueError):
            reconstruct_sweep(cfg)

    def test_monotone_vary_q_non_decreasing(self):
        cfg = _small_cfg(n=256, m=1024, strategies=("vary_q",), activations=("tanh", "relu"),
                         k_values=(8, 16, 32, 64, 128))
        res = reconstruct_sweep(cfg)
        for act in ("tanh", "relu"):
            vals = [r.psnr_db for r in res if r.activation == act]
            assert np.all(np.diff(vals) >= 0)

    def test_relu_vary_sigma_flat(self):
        res = reconstruct_sweep(_small_cfg(strategies=("vary_sigma",), activations=("relu",)))
        vals = [r.psnr_db for r in res]
        assert max(vals) - min(vals) <= 1e-6

    def test_explicit_signal(self):
        x = sample_grid(64)
        y = np.clip(x, 0, 1)
        res = reconstruct_sweep(_small_cfg(m=64, k_values=(4, 8)), signal=(x, y))
        assert len(res) == 2 * 3 * 2

    def test_k_beyond_rank(self):
        with pytest.raises(ValueError):
            reconstruct_sweep(_small_cfg(m=16, k_values=(32,)))
