"""Matplotlib figures written next to the CSV/JSON outputs.

Figures are optional (``output.plot``); the delimited files are the primary
result. Every PNG carries the resolved config in its ``Description`` metadata.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.0,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "figure.dpi": 120,
}


def _save(fig, path, config_json):
    metadata = {"Software": "packetoptics"}
    if config_json:
        metadata["Description"] = config_json
    fig.savefig(path, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
    return path


def _peak(d):
    d = np.asarray(d, dtype=float)
    top = d.max()
    return d / top if top > 0 else d


def _span(x, d, floor=1e-3, pad=0.1):
    """x-limits covering samples above ``floor`` of the peak, padded."""
    d = _peak(d)
    keep = np.flatnonzero(d >= floor)
    if keep.size == 0:
        return x[0], x[-1]
    lo, hi = x[keep[0]], x[keep[-1]]
    margin = max(pad * (hi - lo), 2 * abs(x[1] - x[0]))
    return max(x[0], lo - margin), min(x[-1], hi + margin)


def plot_evolution(path, x, initial, final, reference=None, reference_label=None,
                   title="", config_json=None):
    """Two stacked panels: the initial density below, the evolved one above.

    ``reference`` (optional) is overlaid on the evolved panel, e.g. the
    closed-form far-field pattern.
    """
    with plt.rc_context(STYLE):
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 4.5))
        top.plot(x, _peak(final), color="k", label="evolved")
        if reference is not None:
            top.plot(x, _peak(reference), color="tab:red", ls="--", lw=0.7, alpha=0.7, label=reference_label)
            top.legend(frameon=False, loc="upper right")
        top.set_xlim(*_span(x, final))
        top.set_ylabel("density (peak = 1)")
        top.set_title(title)
        bottom.fill_between(x, _peak(initial), color="0.6", step="mid")
        bottom.set_xlim(*_span(x, initial))
        bottom.set_ylabel("initial")
        bottom.set_xlabel("x")
        fig.tight_layout()
        return _save(fig, path, config_json)


def plot_densities(path, x, curves: dict, title="", xlabel="x", config_json=None):
    """Overlay several peak-normalized densities on one axis."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 3))
        styles = ["-", "--", ":", "-."]
        lo, hi = x[-1], x[0]
        for i, (label, d) in enumerate(curves.items()):
            ax.plot(x, _peak(d), ls=styles[i % len(styles)], label=label)
            if i == 0:
                lo, hi = _span(x, d)
        ax.set_xlim(lo, hi)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("density (peak = 1)")
        ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path, config_json)


def plot_sweep(path, parameter, values, columns: dict, config_json=None):
    """One log-scale panel per metric column against the swept parameter."""
    columns = {k: np.asarray(v, dtype=float) for k, v in columns.items()}
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(len(columns), 1, figsize=(5, 2.2 * len(columns)), squeeze=False)
        for ax, (name, col) in zip(axes[:, 0], columns.items()):
            ax.plot(values, col, "o-", color="k")
            if np.all(col[np.isfinite(col)] > 0):
                ax.set_yscale("log")
            ax.set_ylabel(name)
        axes[-1, 0].set_xlabel(parameter)
        fig.tight_layout()
        return _save(fig, path, config_json)
