"""Matplotlib renderers for campaign reports.

Each renderer writes one PNG next to the delimited output it
illustrates.  All figures use the Agg backend; nothing here opens a
window.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["decay_figure", "spectrum_figure", "strip_figure"]

_FIGSIZE = (6.4, 4.2)
_META = {"Software": "hillspec"}


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def decay_figure(
    s: float,
    r_kappa_by_seed: dict[int, dict[int, float]],
    r_mid_by_seed: dict[int, dict[int, float]],
    n_r: int,
    path: Path,
) -> None:
    """Log-log residual magnitudes with the predicted decay slope."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0), sharey=True)
    for ax, data, label in (
        (axes[0], r_kappa_by_seed, r"$|2\pi n\,\kappa_n - \langle q,\sin 2\pi nx\rangle|$"),
        (axes[1], r_mid_by_seed, r"$|(\lambda_n^++\lambda_n^-)/2 - \mu_n - \langle q,\cos 2\pi nx\rangle|$"),
    ):
        for seed, mags in sorted(data.items()):
            ns = np.array(sorted(n for n in mags if mags[n] > 0))
            if ns.size == 0:
                continue
            vals = np.array([mags[int(n)] for n in ns])
            ax.loglog(ns, vals, ".", ms=3, alpha=0.5)
        ref_n = np.array([max(1, n_r + 1), max(4, 2 * (n_r + 1)) * 8])
        anchor = None
        for mags in data.values():
            cands = [v for n, v in mags.items() if n > n_r and v > 0]
            if cands:
                anchor = max(cands)
                break
        if anchor:
            ref = anchor * (ref_n / ref_n[0]) ** (-(s + 1.0))
            ax.loglog(ref_n, ref, "k--", lw=1, label=rf"slope $-(s+1) = {-(s+1):g}$")
            ax.legend(fontsize=8)
        if n_r > 0:
            ax.axvline(n_r + 0.5, color="gray", lw=0.8, ls=":")
        ax.set_xlabel("n")
        ax.set_title(label, fontsize=9)
    axes[0].set_ylabel("residual magnitude")
    fig.suptitle(f"residual decay, s = {s:g}", fontsize=11)
    _save(fig, path)


def spectrum_figure(table, path: Path) -> None:
    """Eigenvalue deviations from n^2 pi^2 and spectral gap widths."""
    ns = np.arange(1, table.n_max + 1)
    mu_dev = np.array([table.eigs[n - 1].mu.real - (n * math.pi) ** 2 for n in ns])
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    axes[0].plot(ns, mu_dev, "o-", ms=3, label=r"$\mu_n - n^2\pi^2$")
    if table.periodic is not None:
        mids = np.array([table.periodic.pair(int(n)).midpoint - (n * math.pi) ** 2 for n in ns])
        axes[0].plot(ns, mids, "s--", ms=3, label=r"gap midpoint $- n^2\pi^2$")
        gaps = np.array([table.periodic.pair(int(n)).gap for n in ns])
        axes[1].semilogy(ns[gaps > 0], gaps[gaps > 0], "d-", ms=3)
        axes[1].set_title(r"gap widths $\lambda_n^+-\lambda_n^-$", fontsize=10)
    axes[0].set_xlabel("n")
    axes[1].set_xlabel("n")
    axes[0].legend(fontsize=8)
    axes[0].set_title("eigenvalue deviations", fontsize=10)
    _save(fig, path)


def strip_figure(rows: list[tuple[float, float, float]], path: Path, title: str = "") -> None:
    """Heat map of |f(u+iv)| over the sampled strip rectangle."""
    us = sorted({r[0] for r in rows})
    vs = sorted({r[1] for r in rows})
    grid = np.full((len(vs), len(us)), np.nan)
    ui = {u: i for i, u in enumerate(us)}
    vi = {v: i for i, v in enumerate(vs)}
    for u, v, a in rows:
        grid[vi[v], ui[u]] = a
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    im = ax.imshow(
        grid,
        origin="lower",
        aspect="auto",
        extent=(min(us), max(us), min(vs), max(vs)),
        cmap="viridis",
    )
    fig.colorbar(im, ax=ax, label=r"$|f(u+iv)|$")
    ax.set_xlabel("u = Re z")
    ax.set_ylabel("v = Im z")
    if title:
        ax.set_title(f"strip modulus, map: {title}", fontsize=10)
    _save(fig, path)
