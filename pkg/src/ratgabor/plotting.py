"""Matplotlib figures for scan fields and density sweeps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# keeps SVG output byte-identical between runs
plt.rcParams.update({
    "svg.hashsalt": "ratgabor",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.linewidth": 0.6,
})
_METADATA = {"svg": {"Date": None, "Creator": None},
             "png": {"Software": None},
             "pdf": {"CreationDate": None, "Producer": None, "Creator": None}}


def _save(fig, target, fmt=None):
    """Write to a path (format from the extension, SVG by default) or a binary stream."""
    if fmt is None:
        name = str(target) if isinstance(target, (str, bytes)) or hasattr(target, "__fspath__") else ""
        ext = name.rsplit(".", 1)[-1].lower() if "." in name else "svg"
        fmt = ext if ext in _METADATA else "svg"
    fig.savefig(target, format=fmt, metadata=_METADATA[fmt], bbox_inches="tight")
    plt.close(fig)


def sweep_figure(records, title: str = ""):
    """min eigenvalue of P P^H against alpha*beta on a log axis; critical densities marked."""
    ab = np.array([float(r.ab) for r in records])
    vals = np.array([r.min_eig for r in records])
    floor = np.finfo(float).tiny
    critical = np.array([r.reduced.q - r.reduced.p == 1 for r in records])
    fig, ax = plt.subplots(figsize=(7.0, 2.6))
    order = np.argsort(ab, kind="stable")
    ax.plot(ab[order], np.maximum(vals[order], floor), color="0.6", lw=0.5, zorder=1)
    ax.scatter(ab[~critical], np.maximum(vals[~critical], floor), s=6, color="#1b9e77",
               label="other densities", zorder=2)
    ax.scatter(ab[critical], np.maximum(vals[critical], floor), s=10, marker="v",
               color="#d95f02", label=r"$\alpha\beta=(m-1)/m$", zorder=3,
               gid="critical-densities")
    for m in sorted({r.reduced.q for r, c in zip(records, critical) if c}):
        ax.axvline((m - 1) / m, color="#d95f02", lw=0.3, ls=":", zorder=0,
                   gid=f"critical-{m - 1}-{m}")
    ax.set_yscale("log")
    ax.set_xlabel(r"$\alpha\beta$")
    ax.set_ylabel(r"$\min\ \lambda_{\min}(PP^*)$")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower left", frameon=False, fontsize=7)
    return fig


def scan_figure(result, title: str = ""):
    """Heat map of log10 sigma_min(P) over the scanned part of the fundamental domain."""
    field = np.log10(np.maximum(result.sigma_min_field, np.finfo(float).tiny))
    fig, ax = plt.subplots(figsize=(4.2, 3.4))
    dx = result.xs[1] - result.xs[0]
    dw = result.omegas[1] - result.omegas[0]
    extent = (result.xs[0], result.xs[-1] + dx, result.omegas[0], result.omegas[-1] + dw)
    im = ax.imshow(field.T, origin="lower", aspect="auto", extent=extent, cmap="viridis")
    ax.plot([result.argmin.x], [result.argmin.omega], "r+", ms=8)
    fig.colorbar(im, ax=ax, label=r"$\log_{10}\sigma_{\min}(P)$")
    ax.set_xlabel("x")
    ax.set_ylabel(r"$\omega$")
    ax.set_title(title or f"{result.verdict.value}, min = {result.global_min:.3g}")
    return fig


def save_sweep_plot(records, target, title: str = "", fmt=None):
    _save(sweep_figure(records, title), target, fmt)


def save_scan_plot(result, target, title: str = "", fmt=None):
    _save(scan_figure(result, title), target, fmt)
