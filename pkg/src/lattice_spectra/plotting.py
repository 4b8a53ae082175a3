"""Static figures for the command line reports (PNG via the Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def step_figure(rows, path, title="", xlabel="E", ylabel="N(E)", jumps=()):
    """Draw a counting function given as sorted ``(E, N(E))`` rows."""
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    if rows:
        xs, ys = zip(*rows)
        ax.step(xs, ys, where="post", lw=1.2)
    for e in jumps:
        ax.axvline(e, color="0.6", ls=":", lw=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def graph_figure(g, path, title="", highlight=()):
    """Draw a planar graph from its exact coordinates."""
    if g.coords is None:
        raise ValueError("graph has no planar coordinates")
    xy = [(float(p[0]), float(p[1])) for p in g.coords]
    fig, ax = plt.subplots(figsize=(5, 5), dpi=100)
    for i, j in g.edges():
        ax.plot([xy[i][0], xy[j][0]], [xy[i][1], xy[j][1]], color="0.3", lw=0.8)
    hl = set(highlight)
    ax.scatter([p[0] for p in xy], [p[1] for p in xy], s=12,
               c=["tab:red" if v in hl else "tab:blue" for v in range(g.n)], zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def table_figure(rows, path, x, y, title=""):
    """Scatter/line plot of two numeric columns of a list of dicts."""
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    ax.plot([r[x] for r in rows], [r[y] for r in rows], "o-")
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
