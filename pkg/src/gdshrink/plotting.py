"""Static figures rendered from the same arrays written to CSV.

The Agg backend is forced so that plotting works headless.  PNG metadata
is pinned (no software version, no timestamp) unless ``stamp`` is set,
which keeps reruns byte-identical.
"""

from __future__ import annotations

import datetime
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path, stamp: bool) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Software": None}
    if stamp:
        meta["Creation Time"] = datetime.datetime.now().isoformat(timespec="seconds")
    fig.savefig(path, dpi=100, metadata=meta)
    plt.close(fig)
    return path


def line_plot(path, series, *, xlabel="", ylabel="", title="", logy=False, stamp=False):
    """``series``: iterable of ``(label, x, y)``."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, x, y in series:
        ax.plot(x, y, label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if any(label for label, _, _ in series):
        ax.legend(fontsize="small")
    fig.tight_layout()
    return _save(fig, path, stamp)


def image_grid(path, images, titles, *, stamp=False):
    """Row of 2D arrays, e.g. principal components on an image grid."""
    n = len(images)
    fig, axes = plt.subplots(1, n, figsize=(2.2 * n, 2.4), squeeze=False)
    for ax, img, t in zip(axes[0], images, titles):
        ax.imshow(img, cmap="coolwarm")
        ax.set_title(t, fontsize="small")
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    return _save(fig, path, stamp)
