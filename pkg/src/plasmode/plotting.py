"""Figures for characteristic-polynomial spans and frequency sweeps.

Rendering goes through matplotlib's non-interactive Agg backend; the file
format follows the output extension (``.svg``, ``.png``, ``.pdf``).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .charpoly import CharPoly  # noqa: E402
from .drude import SweepResult  # noqa: E402

__all__ = ["plot_charpoly", "plot_sweep"]

_STYLE = {
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "plasmode",  # stable element ids, so SVG output is reproducible
}


def _save(fig, path):
    path = Path(path)
    fig.tight_layout()
    meta = {"Date": None} if path.suffix.lower() in (".svg", ".pdf") else None
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path


def plot_charpoly(cp: CharPoly, q_low: float, q_high: float, path, points: int = 2001, roots=None,
                  threshold=None, title=None):
    """f_N(q) on [q_low, q_high], with optional root markers and a |f| threshold band."""
    q = np.linspace(q_low, q_high, points)
    f = np.asarray(cp(q), dtype=float)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        ax.plot(q, f, lw=1.2, color="C0")
        ax.axhline(0.0, color="0.3", lw=0.6)
        if threshold is not None:
            ax.axhspan(-threshold, threshold, color="C1", alpha=0.15, lw=0)
        if roots is not None:
            r = np.asarray(roots, dtype=float)
            r = r[(r >= q_low) & (r <= q_high)]
            ax.plot(r, np.zeros_like(r), "o", ms=3.5, color="C3")
        ax.set_xlabel("q")
        ax.set_ylabel(r"$f_N(q)$")
        ax.set_title(title or f"characteristic polynomial, N = {cp.N}")
        return _save(fig, path)


def plot_sweep(sr: SweepResult, path, mode_omegas=None, title=None):
    """Norm of the polarization tensor against angular frequency, peaks marked."""
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 3.6))
        ax.plot(sr.omegas, sr.norm_m, lw=1.2, color="C0")
        if sr.peaks.size:
            ax.plot(sr.omegas[sr.peaks], sr.norm_m[sr.peaks], "v", ms=4, color="C3")
        if mode_omegas is not None:
            for w in mode_omegas:
                ax.axvline(w, color="0.5", lw=0.5, ls=":")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(r"$\omega$ (s$^{-1}$)")
        ax.set_ylabel(rf"$\|M\|$ ({sr.norm})")
        ax.set_title(title or "polarization tensor norm")
        return _save(fig, path)
