"""Figure rendering for experiment reports.

All plots are written straight to image files (no interactive backend);
each report figure sits next to the CSV it visualizes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def plot_reconstruction(path: str | Path, panels: list[dict]) -> None:
    """One subplot per scheme: analytic reference, reconstruction, sample points.

    Each panel dict carries: title, reference (t, value), dense (t, value),
    samples (t, value).
    """
    fig, axes = plt.subplots(len(panels), 1, figsize=(8, 3.0 * len(panels)), sharex=False)
    axes = np.atleast_1d(axes)
    for ax, panel in zip(axes, panels):
        t_ref, v_ref = panel["reference"]
        t_dense, v_dense = panel["dense"]
        t_s, v_s = panel["samples"]
        ax.plot(t_ref, v_ref, "k--", lw=1.0, label="analytic")
        ax.plot(t_dense, v_dense, "b-", lw=1.2, label="reconstruction")
        ax.plot(t_s, v_s, "ro", ms=3.5, label="averaged record")
        ax.set_title(panel["title"])
        ax.set_xlabel("time")
        ax.set_ylabel(r"$r_z$")
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_spectrum(
    path: str | Path,
    freqs: np.ndarray,
    amps: np.ndarray,
    band: tuple[float, float],
    fit_freqs: np.ndarray | None = None,
    fit_amps: np.ndarray | None = None,
    f_max: float | None = None,
) -> None:
    """Amplitude spectrum with the fitted resonance curve and band edges."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    keep = freqs <= (f_max if f_max is not None else 2.0 * band[1])
    ax.plot(freqs[keep], amps[keep], "b-", lw=1.0, label="spectrum")
    if fit_freqs is not None:
        ax.plot(fit_freqs, fit_amps, "r-.", lw=1.5, label="resonance fit")
    for edge in band:
        ax.axvline(edge, color="k", ls="--", lw=1.0)
    ax.set_xlabel("frequency")
    ax.set_ylabel("amplitude")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def plot_sweep(
    path: str | Path,
    rows: list[dict],
    axis_label: str,
    true_tau: float | None = None,
) -> None:
    """Mean decoherence-time estimates with +-sigma error bars, one line per scheme."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    schemes = sorted({row["scheme"] for row in rows})
    styles = {"sinc": ("b--", "s"), "interleaved": ("k-", "o")}
    for scheme in schemes:
        ok = [r for r in rows if r["scheme"] == scheme and r["status"] == "ok"]
        if not ok:
            continue
        x = [r["value"] for r in ok]
        y = [r["mean_tau"] for r in ok]
        err = [r["std_tau"] for r in ok]
        line, marker = styles.get(scheme, ("g-", "^"))
        ax.errorbar(x, y, yerr=err, fmt=line, marker=marker, ms=4, capsize=3, label=scheme)
    if true_tau is not None and np.isfinite(true_tau):
        ax.axhline(true_tau, color="0.5", ls=":", lw=1.0, label=r"$\tau = 1/\kappa$")
    ax.set_xlabel(axis_label)
    ax.set_ylabel(r"estimated $\tau$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
