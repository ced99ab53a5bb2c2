"""Matplotlib figures written next to the command-line reports."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Wedge  # noqa: E402

from .embed import Drawing  # noqa: E402
from .svg import branch_cone  # noqa: E402

VERDICT_COLOURS = {"yes": "#54a24b", "no": "#e45756", "uncertain": "#f58518"}


def plot_drawing(d: Drawing, path, bisectors: bool = False, cones: bool = False, hub: str | None = None) -> None:
    """Save a picture of ``d``; tiny sub-drawings show up as single dots."""
    t = d.tree
    fig, ax = plt.subplots(figsize=(6, 6))
    for u, v in t.ordered_edges():
        (x1, y1), (x2, y2) = d.coords[u], d.coords[v]
        ax.plot([x1, x2], [y1, y2], color="#333333", lw=1.2, zorder=2)
    xy = d.array()
    ax.scatter(xy[:, 0], xy[:, 1], s=14, color="#111111", zorder=3)
    span = float(np.ptp(xy, axis=0).max()) if len(xy) > 1 else 1.0
    if bisectors:
        for u, v in t.ordered_edges():
            a, b = np.asarray(d.coords[u], float), np.asarray(d.coords[v], float)
            e = b - a
            length = float(np.hypot(*e))
            if length == 0:
                continue
            mid, normal = (a + b) / 2, np.array([-e[1], e[0]]) / length
            half = max(length, 0.05 * span)
            p, q = mid - half * normal, mid + half * normal
            ax.plot([p[0], q[0]], [p[1], q[1]], color="#e45756", lw=0.6, ls="--", zorder=1)
    if cones and len(t) > 1:
        hub = hub or max(t.nodes, key=t.degree)
        for u in t.neighbors(hub):
            cone = branch_cone(d, hub, u)
            if cone is None:
                continue
            start, end = np.degrees(cone)
            wedge = Wedge(d.coords[u], 0.2 * span, start, end, color="#4c78a8", alpha=0.15)
            ax.add_patch(wedge)
    ax.set_aspect("equal")
    ax.set_title(f"{len(t)} nodes")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_verdict_counts(rows: Iterable[tuple[int, str]], path) -> None:
    """Stacked bars of verdict counts per tree size from ``(n, verdict)`` rows."""
    counts = Counter(rows)
    sizes = sorted({n for n, _ in counts})
    fig, ax = plt.subplots(figsize=(7, 4))
    bottom = np.zeros(len(sizes))
    for verdict, colour in VERDICT_COLOURS.items():
        vals = np.array([counts.get((n, verdict), 0) for n in sizes], dtype=float)
        if vals.any():
            ax.bar([str(n) for n in sizes], vals, bottom=bottom, color=colour, label=verdict)
            bottom += vals
    ax.set_xlabel("nodes")
    ax.set_ylabel("trees")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
