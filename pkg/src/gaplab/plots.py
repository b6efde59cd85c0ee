"""Figure rendering for the report path.

Every CLI command can drop a matplotlib figure next to its delimited output;
these helpers keep the styling in one place.  Figures are static files only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import GapCurve, RegionAtlas, region_lookup


def save_curves(path: str, curves: Sequence[GapCurve], labels: Sequence[str],
                title: str = "", ylabel: str = "G") -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for curve, label in zip(curves, labels):
        ax.plot(curve.lambdas, curve.values, label=label, lw=1.4)
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_compare(path: str, lambdas: Sequence[float],
                 columns: dict[str, Sequence[float]], title: str = "") -> None:
    """Two panels: the curves, and the absolute pairwise deviations."""
    fig, (ax1, ax2) = plt.subplots(
        2, 1, figsize=(7, 6.5), sharex=True, height_ratios=[3, 1]
    )
    lam = np.asarray(lambdas)
    names = [n for n, col in columns.items() if col is not None]
    for name in names:
        ax1.plot(lam, columns[name], label=name, lw=1.3)
    ax1.set_ylabel("G")
    ax1.grid(alpha=0.3)
    ax1.legend()
    if title:
        ax1.set_title(title)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            diff = np.abs(np.asarray(columns[a]) - np.asarray(columns[b]))
            ax2.semilogy(lam, np.maximum(diff, 1e-17), label=f"|{a}-{b}|", lw=1.0)
    ax2.set_xlabel(r"$\lambda$")
    ax2.set_ylabel("abs diff")
    ax2.grid(alpha=0.3)
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_atlas(path: str, atlas: RegionAtlas, title: str = "") -> None:
    """Region map in the (lambda, t) plane, colored by region index."""
    t_lo = float(min(atlas.t_breakpoints))
    t_hi_bp = max(atlas.t_breakpoints)
    t_hi = float(t_hi_bp) * 1.5 if atlas.h == 0 else float(t_hi_bp)
    lam_hi = 2.0 / t_lo
    lams = np.linspace(1e-6, lam_hi * 1.05, 321)
    ts = np.linspace(t_lo * 1.0001, t_hi, 241)
    idx = np.full((len(ts), len(lams)), np.nan)
    lookup = {id(region): i for i, region in enumerate(atlas.regions)}
    for i, t in enumerate(ts):
        for j, lam in enumerate(lams):
            region = region_lookup(atlas, Fraction(t).limit_denominator(10**6),
                                   Fraction(lam).limit_denominator(10**6))
            if region is not None:
                idx[i, j] = lookup[id(region)]
    fig, ax = plt.subplots(figsize=(6.5, 5))
    mesh = ax.pcolormesh(lams, ts, idx, cmap="tab20", shading="nearest")
    fig.colorbar(mesh, ax=ax, label="region index")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("t")
    ax.set_title(title or f"region atlas, depth h={atlas.h}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
