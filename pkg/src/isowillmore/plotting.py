"""Static figures for sweeps and the reproduction report (Agg backend, PNG files)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "font.size": 9,
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_sweep(rows, path, k=None):
    """Component energies W1, W2, W3 (units of pi) against t."""
    t = np.array([r.t for r in rows])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for name, lab in (("W1", "$W(M_1)$"), ("W2", "$W(M_2)$"), ("W3", "$W(M_3)$"), ("total", "total")):
            y = np.array([getattr(r, name) for r in rows])
            ax.plot(t, y, "--" if name == "total" else "-", lw=1.2, label=lab)
        ax.set_xlabel("boost parameter $t$")
        ax.set_ylabel(r"energy / $\pi$")
        if k is not None:
            ax.set_title(f"hyperbolic family, k = {k}")
        ax.legend()
        return _save(fig, path)


def plot_curvature(r, K_fd, K_closed, path, title=None, breaks=()):
    """Finite-difference vs closed-form Gauss curvature along a ray."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(r, K_closed, "-", lw=1.2, label="closed form")
        ax.plot(r, K_fd, ".", ms=3, label="finite differences")
        for b in breaks:
            ax.axvline(b, color="0.6", lw=0.8, ls=":")
        ax.set_xlabel("$r = |z|$")
        ax.set_ylabel("$K$")
        if title:
            ax.set_title(title)
        ax.legend()
        return _save(fig, path)


def plot_report_summary(rows, path):
    """Log10 of the relative/absolute miss per numeric report row."""
    labels, err, colors = [], [], []
    for row in rows:
        e, c = row.get("expected"), row.get("computed")
        if not isinstance(e, (int, float)) or not isinstance(c, (int, float)):
            continue
        d = abs(c - e) / (abs(e) if row["mode"] == "rel" and e else 1.0)
        labels.append(f"{row['family'][:4]} k={row['k']} {row['quantity']}")
        err.append(np.log10(max(d, 1e-17)))
        colors.append("tab:green" if row["pass"] else "tab:red")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 0.18 * len(labels) + 1.2))
        ax.barh(np.arange(len(labels)), np.array(err) + 17, left=-17, color=colors)
        ax.set_yticks(np.arange(len(labels)), labels, fontsize=6)
        ax.set_xlabel("log10 |computed - expected| (relative for rel rows)")
        ax.invert_yaxis()
        return _save(fig, path)
