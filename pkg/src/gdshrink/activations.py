"""Activation zoo for shallow networks.

Every activation is evaluated as ``eta(sigma * u)`` where ``u = x - b`` is the
shifted coordinate and ``sigma`` a positive scale.  All functions are
vectorised over ``u``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, ndtr

KINDS = (
    "heaviside",
    "relu",
    "relu2",
    "tanh",
    "gelu",
    "silu",
    "sinc",
    "gaussian",
    "impulse",
)

# power r-1 in x^(r-1) * [x > 0]; these kinds are exactly scale equivariant
SPLINE_ORDER = {"heaviside": 1, "relu": 2, "relu2": 3}


class Monotonicity(str, enum.Enum):
    MONOTONIC = "monotonic"
    NON_MONOTONIC = "non_monotonic"


_MONOTONIC = frozenset({"heaviside", "relu", "relu2", "tanh", "gelu", "silu"})


@dataclass(frozen=True)
class ActivationSpec:
    """Named activation with its scale factor ``sigma``."""

    kind: str
    sigma: float = 1.0

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise ValueError(f"unknown activation {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        sigma = float(self.sigma)
        if not np.isfinite(sigma) or sigma <= 0:
            raise ValueError(f"sigma must be positive and finite, got {self.sigma!r}")
        object.__setattr__(self, "sigma", sigma)

    def __call__(self, u):
        return evaluate(self, u)

    @property
    def monotonicity(self) -> Monotonicity:
        return classify(self)


def _eta(kind: str, v: np.ndarray) -> np.ndarray:
    if kind == "heaviside":
        return (v > 0).astype(float)
    if kind == "relu":
        return np.maximum(v, 0.0)
    if kind == "relu2":
        return np.maximum(v, 0.0) ** 2
    if kind == "tanh":
        return np.tanh(v)
    if kind == "gelu":
        return v * ndtr(v)
    if kind == "silu":
        return v * expit(v)
    if kind == "sinc":
        return np.sinc(v)
    if kind == "gaussian":
        return np.exp(-(v * v) / np.pi)
    if kind == "impulse":
        return (v == 0).astype(float)
    raise ValueError(kind)  # pragma: no cover


def evaluate(spec: ActivationSpec, u):
    """Return ``eta(sigma * u)`` for ``spec``.

    Scalars in, scalar (float) out; arrays in, arrays out.

    The Gaussian is ``exp(-v**2 / pi)`` applied to ``v = sigma * u`` so that it
    remains a function of the scaled argument.  ``impulse`` is the Kronecker
    delta at exactly zero and only makes sense on a shared discrete grid.
    """
    arr = np.asarray(u, dtype=float)
    out = _eta(spec.kind, spec.sigma * arr)
    if out.ndim == 0:
        return float(out)
    return out


def classify(spec: ActivationSpec) -> Monotonicity:
    """Monotonic family (tends to ReLU/Heaviside under scaling) or not.

    GELU and SiLU are not strictly monotonic but tend to ReLU as sigma grows,
    so they are grouped with the monotonic kinds.
    """
    if spec.kind in _MONOTONIC:
        return Monotonicity.MONOTONIC
    return Monotonicity.NON_MONOTONIC
