"""Figures written next to CLI reports."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata keeps PNG bytes reproducible across runs
_META = {"Software": None}


def _save(fig, path: Path) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return path.name


def cayley_table(G, out_dir, stem="cayley") -> str:
    """Heatmap of the multiplication table, cells colored by element index."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(G.mul, cmap="viridis", interpolation="nearest")
    ax.set_title(f"{G.name}, order {G.order}")
    ax.set_xlabel("h")
    ax.set_ylabel("g")
    if G.order <= 16:
        ax.set_xticks(range(G.order))
        ax.set_yticks(range(G.order))
    return _save(fig, Path(out_dir) / f"{stem}.png")


def cohomology_dims(dims: dict, title: str, out_dir, stem="cohomology") -> str:
    degrees = sorted(dims)
    fig, ax = plt.subplots(figsize=(4, 3))
    ax.bar(degrees, [dims[n] for n in degrees], color="tab:blue")
    ax.set_xticks(degrees)
    ax.set_xlabel("n")
    ax.set_ylabel("dim H^n")
    ax.set_title(title)
    return _save(fig, Path(out_dir) / f"{stem}.png")


def cochain_grid(values: np.ndarray, title: str, out_dir, stem="value") -> str:
    """A 2-cochain with scalar values as a |G| x |G| grid."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(values, cmap="Greys", interpolation="nearest", vmin=0)
    ax.set_title(title)
    ax.set_xlabel("h")
    ax.set_ylabel("g")
    return _save(fig, Path(out_dir) / f"{stem}.png")
