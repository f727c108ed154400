"""Shrinkage operators on singular values: ridge, PCA and gradient descent.

Each operator maps a spectrum ``s`` to a shrunk inverse ``s_hat_inv`` and the
regularised weights follow from ``w = V diag(s_hat_inv) U^T y``.  Zero singular
values always map to zero (pseudo-inverse convention), which is also where
gradient descent started from ``w0 = 0`` ends up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import SpectralDecomposition

KINDS = ("ridge", "pca", "gd_flow", "gd_neumann")

# slack on alpha * s_max**2 <= 1 so that alpha = s_max**-2 passes after rounding
_STABILITY_SLACK = 1e-9


class StabilityError(ValueError):
    """alpha * s**2 > 1: the iteration (I - alpha A^T A)^q no longer contracts."""


@dataclass(frozen=True)
class ShrinkagePolicy:
    """One shrinkage rule and its hyperparameters.

    Only the fields relevant to ``kind`` are used: ``lam`` for ridge,
    ``kappa`` for pca, ``alpha`` and ``q`` for the two GD forms.  ``q`` is
    real for ``gd_flow`` and must be a positive integer for ``gd_neumann``.
    """

    kind: str
    lam: float = 0.0
    kappa: float = 0.0
    alpha: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown shrinkage kind {self.kind!r}")
        if self.kind == "ridge" and not self.lam >= 0:
            raise ValueError("ridge lambda must be >= 0")
        if self.kind == "pca" and not self.kappa >= 0:
            raise ValueError("pca kappa must be >= 0")
        if self.kind in ("gd_flow", "gd_neumann"):
            if not (self.alpha > 0 and self.q > 0):
                raise ValueError("alpha and q must be positive")
            if self.kind == "gd_neumann" and float(self.q) != int(self.q):
                raise ValueError("gd_neumann needs an integer q")

    @classmethod
    def ridge(cls, lam: float) -> "ShrinkagePolicy":
        return cls("ridge", lam=float(lam))

    @classmethod
    def pca(cls, kappa: float) -> "ShrinkagePolicy":
        return cls("pca", kappa=float(kappa))

    @classmethod
    def gd_flow(cls, alpha: float, q: float) -> "ShrinkagePolicy":
        return cls("gd_flow", alpha=float(alpha), q=float(q))

    @classmethod
    def gd_neumann(cls, alpha: float, q: int) -> "ShrinkagePolicy":
        return cls("gd_neumann", alpha=float(alpha), q=int(q))

    def to_dict(self) -> dict:
        if self.kind == "ridge":
            return {"kind": "ridge", "lambda": self.lam}
        if self.kind == "pca":
            return {"kind": "pca", "kappa": self.kappa}
        return {"kind": self.kind, "alpha": self.alpha, "q": self.q}

    @classmethod
    def from_dict(cls, d: dict) -> "ShrinkagePolicy":
        kind = d["kind"]
        if kind == "ridge":
            return cls.ridge(d.get("lambda", d.get("lam", 0.0)))
        if kind == "pca":
            return cls.pca(d["kappa"])
        if kind == "gd_flow":
            return cls.gd_flow(d["alpha"], d["q"])
        if kind == "gd_neumann":
            return cls.gd_neumann(d["alpha"], int(d["q"]))
        raise ValueError(f"unknown shrinkage kind {kind!r}")


def mask_gd(s, alpha: float, q: float):
    """Gradient-flow mask ``1 - exp(-alpha q s^2)``."""
    if not (alpha > 0 and q > 0):
        raise ValueError("alpha and q must be positive")
    s = np.asarray(s, dtype=float)
    out = -np.expm1(-alpha * q * s * s)
    return float(out) if out.ndim == 0 else out


def mask_gd_neumann(s, alpha: float, q: int):
    """Exact q-step GD mask ``1 - (1 - alpha s^2)^q`` (requires ``alpha s^2 <= 1``)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    s = np.asarray(s, dtype=float)
    z = alpha * s * s
    if np.any(z > 1.0 + _STABILITY_SLACK):
        raise StabilityError(
            f"alpha * s^2 = {np.max(z):.6g} > 1; GD is unstable for this step size"
        )
    z = np.minimum(z, 1.0)
    # log1p/expm1 keep precision when alpha s^2 is tiny and q is large
    with np.errstate(divide="ignore"):
        out = -np.expm1(int(q) * np.log1p(-z))
    return float(out) if out.ndim == 0 else out


def mask_pca(s, kappa: float):
    """Hard threshold ``[s >= kappa]``."""
    s = np.asarray(s, dtype=float)
    out = (s >= kappa).astype(float)
    return float(out) if out.ndim == 0 else out


def apply(policy: ShrinkagePolicy, sd) -> np.ndarray:
    """Shrunk inverse singular values for ``policy``."""
    s = sd.s if isinstance(sd, SpectralDecomposition) else np.asarray(sd, float)
    s = np.atleast_1d(s)
    pos = s > 0
    inv = np.zeros_like(s)
    inv[pos] = 1.0 / s[pos]
    k = policy.kind
    if k == "ridge":
        out = np.zeros_like(s)
        out[pos] = s[pos] / (s[pos] ** 2 + policy.lam)
        return out
    if k == "pca":
        return mask_pca(s, policy.kappa) * inv
    if k == "gd_flow":
        return mask_gd(s, policy.alpha, policy.q) * inv
    return mask_gd_neumann(s, policy.alpha, policy.q) * inv


def solve(sd: SpectralDecomposition, policy: ShrinkagePolicy, y) -> np.ndarray:
    """Regularised weights ``V diag(s_hat_inv) U^T y``."""
    y = np.asarray(y, dtype=float)
    if y.shape != (sd.u.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({sd.u.shape[0]},)")
    return sd.v @ (apply(policy, sd) * (sd.u.T @ y))


def fitted(sd: SpectralDecomposition, policy: ShrinkagePolicy, y) -> np.ndarray:
    """``A @ solve(...)`` without forming ``A``: ``U diag(s * s_hat_inv) U^T y``."""
    y = np.asarray(y, dtype=float)
    return sd.u @ (sd.s * apply(policy, sd) * (sd.u.T @ y))
