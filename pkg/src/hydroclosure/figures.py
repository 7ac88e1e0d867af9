"""Matplotlib figure rendering for the CLI report path.

Each report command writes a PNG next to its delimited output.  Figures are
rendered on the Agg backend with fixed geometry and stripped PNG metadata so
repeated runs produce identical bytes.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save",
    "dispersion_figure",
    "greens_figure",
    "spectrum_figure",
    "evolve_figure",
    "ce_figure",
]

_FIGSIZE = (6.4, 4.0)
_DPI = 110


def save(fig, path: str) -> None:
    fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    plt.close(fig)


def dispersion_figure(k: np.ndarray, lam: np.ndarray, tau: float, kc: float):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(k, lam, color="tab:blue", lw=1.5, label=r"$\lambda_*(k)$")
    ax.axhline(-1.0 / tau, color="tab:red", ls="--", lw=1.0, label=r"essential: $-1/\tau$")
    ax.axvline(kc, color="gray", ls=":", lw=1.0, label=rf"$k_{{crit}}={kc:.4f}$")
    ax.set_xlabel("wave number k")
    ax.set_ylabel("slow eigenvalue")
    ax.set_title(rf"Slow branch of the dispersion relation, $\tau={tau:g}$")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    return fig


def greens_figure(x: np.ndarray, g: np.ndarray):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    neg = x < 0
    pos = x > 0
    ax.plot(x[neg], g[neg], color="tab:blue", lw=1.5)
    ax.plot(x[pos], g[pos], color="tab:blue", lw=1.5)
    for sign in (-1.0, 1.0):
        ax.plot([0], [sign], marker="o", mfc="white", mec="tab:blue", ms=5)
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\tilde g(x)=e^{x^2}(\mathrm{sign}\,x-\mathrm{erf}\,x)$")
    ax.set_title("Diagonal Green's function on the imaginary axis (jump at 0)")
    fig.tight_layout()
    return fig


def spectrum_figure(lam_points: list[complex], ritz: np.ndarray, tau: float, k: float):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.axvline(-1.0 / tau, color="tab:red", ls="--", lw=1.2, label=r"essential line $\mathrm{Re}=-1/\tau$")
    if len(ritz):
        ax.plot(ritz.real, ritz.imag, ".", color="gray", ms=4, label="truncation Ritz values")
    for lam in lam_points:
        ax.plot([lam.real], [lam.imag], "*", color="tab:blue", ms=12)
    ax.plot([], [], "*", color="tab:blue", ms=12, label="isolated eigenvalue")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(rf"Spectrum of the truncated operator, $k={k:g}$, $\tau={tau:g}$")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    return fig


def evolve_figure(times: np.ndarray, grid: np.ndarray, profiles: np.ndarray, model: str):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    n_show = min(6, len(times))
    pick = np.unique(np.linspace(0, len(times) - 1, n_show).astype(int))
    for i in pick:
        ax1.plot(grid, profiles[i], lw=1.2, label=f"t={times[i]:.3g}")
    ax1.set_xlabel("x")
    ax1.set_ylabel("density")
    ax1.set_title(f"profiles ({model})")
    ax1.legend(fontsize=8)
    amp = np.max(np.abs(profiles - profiles.mean(axis=1, keepdims=True)), axis=1)
    with np.errstate(divide="ignore"):
        ax2.semilogy(times, np.maximum(amp, 1e-300), color="tab:blue", lw=1.5)
    ax2.set_xlabel("t")
    ax2.set_ylabel("max |density - mean|")
    ax2.set_title("fluctuation amplitude")
    fig.tight_layout()
    return fig


def ce_figure(terms: list[tuple[int, int, object]], order: int):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    taus = [t[0] for t in terms]
    coeffs = [float(t[2]) for t in terms]
    ax.bar([str(t) for t in taus], coeffs, color="tab:blue", width=0.5)
    ax.axhline(0.0, color="gray", lw=0.8)
    for x, c, (tp, kp, _) in zip(range(len(terms)), coeffs, terms):
        va = "bottom" if c >= 0 else "top"
        off = math.copysign(0.02 * max(abs(v) for v in coeffs), c)
        ax.text(x, c + off, rf"$k^{{{kp}}}\tau^{{{tp}}}$", ha="center", va=va, fontsize=9)
    ax.set_xlabel("tau power")
    ax.set_ylabel("exact coefficient")
    ax.set_title(f"Chapman-Enskog multiplier terms through order {order}")
    fig.tight_layout()
    return fig
