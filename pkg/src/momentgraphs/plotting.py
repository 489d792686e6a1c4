"""Static figures for moment graphs, degree tables and BM stalks (Agg backend, files only)."""
from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .moment_graph import MomentGraph  # noqa: E402


def _layout(G: MomentGraph) -> dict[int, tuple[float, float]]:
    rows: dict[int, list[int]] = {}
    for i, d in enumerate(G.depth):
        rows.setdefault(d, []).append(i)
    pos = {}
    for d, members in rows.items():
        for k, i in enumerate(members):
            pos[i] = (k - (len(members) - 1) / 2, float(d))
    return pos


def plot_moment_graph(G: MomentGraph, path: str, title: str | None = None, stalk_ranks: Sequence[int] | None = None) -> None:
    """Hasse-style drawing: height is order depth, edges carry their coroot labels."""
    pos = _layout(G)
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * len(G) ** 0.5 * 2), 1.5 + 1.4 * (max(G.depth, default=0) + 1)))
    for e in G.edges:
        (x0, y0), (x1, y1) = pos[e.u], pos[e.v]
        ax.plot([x0, x1], [y0, y1], color="0.55", lw=1.2, zorder=1)
        ax.text((x0 + x1) / 2, (y0 + y1) / 2, e.label.coroot_string(), fontsize=7, color="tab:blue",
                ha="center", va="center", bbox=dict(fc="white", ec="none", pad=0.5))
    for i, (x, y) in pos.items():
        ax.scatter([x], [y], s=260, color="white", edgecolors="black", zorder=2)
        ax.text(x, y, str(i), ha="center", va="center", fontsize=8, zorder=3)
        note = str(G.vertices[i])
        if stalk_ranks is not None:
            note += f"  r={stalk_ranks[i]}"
        ax.text(x, y - 0.28, note, ha="center", va="top", fontsize=6)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_dimension_table(series: Mapping[str, Sequence[int]], path: str, title: str | None = None) -> None:
    """Grouped bars of graded dimensions, one group per degree."""
    names = list(series)
    width = 0.8 / max(len(names), 1)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for k, name in enumerate(names):
        dims = list(series[name])
        ax.bar([d + k * width for d in range(len(dims))], dims, width=width, label=name)
    ax.set_xlabel("degree")
    ax.set_ylabel("dimension")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
