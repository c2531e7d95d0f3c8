"""Figure rendering for the report path (log-log scaling and error plots)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (5.0, 3.4),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _styled():
    return plt.rc_context(_RC)


def save_scaling_figure(path: str, xs, ys, xlabel: str, ylabel: str,
                        slope: float | None = None, title: str = "") -> str:
    """Log-log scatter of counts vs a sweep parameter with the fitted slope."""
    with _styled():
        fig, ax = plt.subplots()
        ax.loglog(xs, ys, "o-", label="measured")
        if slope is not None:
            x0, y0 = xs[0], ys[0]
            ref = [y0 * (x / x0) ** slope for x in xs]
            ax.loglog(xs, ref, "--", label=f"slope {slope:.2f}")
            ax.legend()
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)
    return path


def save_error_figure(path: str, ns, errors, xlabel: str = "Trotter steps n",
                      ylabel: str = "state error", title: str = "") -> str:
    with _styled():
        fig, ax = plt.subplots()
        ax.loglog(ns, errors, "o-")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)
    return path


def save_drift_figure(path: str, times, drift: np.ndarray, title: str = "") -> str:
    with _styled():
        fig, ax = plt.subplots()
        for i in range(drift.shape[0]):
            ax.plot(times, drift[i], alpha=0.7)
        ax.set_xlabel("t")
        ax.set_ylabel("|<G>(t) - <G>(0)|")
        if title:
            ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)
    return path


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
