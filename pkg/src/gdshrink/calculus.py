"""Relations between GD hyperparameters ``(alpha, q)`` and the retained spectrum.

With the mask ``m(s) = 1 - exp(-alpha q s^2)`` and a threshold ``eps``:

* the singular value where ``m = 1 - eps`` is ``kappa = sqrt(-log(eps) / (alpha q))``;
* with ``alpha = s_max^-2`` and ``eps = e^-1`` keeping ``K`` components needs
  ``q = (s_max / s_K)^2`` iterations;
* the active window ``s_max / kappa`` is ``sqrt(q / -log(eps))``.
"""

from __future__ import annotations

import math

import numpy as np

from .shrinkage import mask_gd
from .spectral import SpectralDecomposition

E_INV = math.exp(-1.0)


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"mask threshold must be in (0, 1), got {eps}")
    return eps


def kappa_from(alpha: float, q: float, eps: float = E_INV) -> float:
    """Singular value at which the GD mask equals ``1 - eps``."""
    eps = _check_eps(eps)
    if not (alpha > 0 and q > 0):
        raise ValueError("alpha and q must be positive")
    return math.sqrt(-math.log(eps) / (alpha * q))


def _spectrum(sd) -> np.ndarray:
    return sd.s if isinstance(sd, SpectralDecomposition) else np.asarray(sd, float)


def iterations_for_K(sd, K: int) -> float:
    """Iterations ``q = (s_0 / s_K)^2`` placing the mask's ``1 - e^-1`` point on ``s_K``.

    Assumes the iteration-efficient step size ``alpha = s_0^-2``.
    """
    s = _spectrum(sd)
    if not 0 <= K < s.size:
        raise IndexError(f"K={K} out of range [0, {s.size})")
    if s[K] <= 0:
        raise ValueError(f"s_{K} = 0: no finite number of iterations reaches it")
    return float((s[0] / s[K]) ** 2)


def iteration_curve(sd, Ks) -> np.ndarray:
    """Vectorised :func:`iterations_for_K`."""
    return np.array([iterations_for_K(sd, int(k)) for k in Ks])


def active_window_rho(q: float, eps: float = E_INV) -> float:
    """Width ``s_max / kappa`` of the pass band, ``sqrt(q / -log(eps))``."""
    eps = _check_eps(eps)
    if not q > 0:
        raise ValueError("q must be positive")
    if eps == E_INV:
        return math.sqrt(q)
    return math.sqrt(q / -math.log(eps))


def grey_zone_width_db(hi: float, lo: float) -> float:
    """Width in dB (``20 log10`` of the singular-value ratio) between the
    points where the mask equals ``hi`` and ``lo``.

    Independent of ``alpha`` and ``q``: both rescale ``s`` by the same factor.
    """
    if not (0 < lo < 1 and 0 < hi < 1):
        raise ValueError("hi and lo must be in (0, 1)")
    if hi < lo:
        raise ValueError("need hi >= lo")
    # m(s) = p  <=>  alpha q s^2 = -log(1 - p)
    ratio_sq = math.log1p(-hi) / math.log1p(-lo)
    return 10.0 * math.log10(ratio_sq)


def bandwidth_to_K(B: float) -> float:
    """Number of components for bandwidth ``B``: ``K = 2B - 1/2`` (``~ 2B``)."""
    if not B > 0:
        raise ValueError("bandwidth must be positive")
    return 2.0 * B - 0.5


def effective_component_count(sd, alpha: float, q: float, eps: float = E_INV) -> int:
    """Number of singular values whose GD mask is at least ``1 - eps``."""
    eps = _check_eps(eps)
    s = _spectrum(sd)
    return int(np.count_nonzero(mask_gd(s, alpha, q) >= 1.0 - eps))
