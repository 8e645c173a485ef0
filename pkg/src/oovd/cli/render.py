"""Matplotlib drawings: subdivisions and trees as SVG, bench summary figures."""
from __future__ import annotations

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection, PolyCollection  # noqa: E402

from ..diagrams import Subdivision  # noqa: E402
from ..steiner import SteinerSolution, Tree  # noqa: E402

__all__ = ["render_svg", "plot_bench"]

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "svg.fonttype": "none",
}

TERMINAL = "#1f2a44"
STEINER = "#d62728"
ADDED = "#d62728"


def _new(figsize=(6, 6)):
    with mpl.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    return fig, ax


def _draw_subdivision(ax, sub: Subdivision, terminals=None, color_by_nearest=True):
    polys = [np.array([p.to_float() for p in f.polygon]) for f in sub.faces]
    if color_by_nearest and sub.faces and sub.faces[0].data is not None:
        cmap = plt.get_cmap("tab20")
        colors = [cmap((f.data[6] - 1) % 20) for f in sub.faces]
    else:
        colors = ["#f4f4f4"] * len(polys)
    ax.add_collection(PolyCollection(polys, facecolors=colors, edgecolors="k", linewidths=0.25, alpha=0.85))
    if terminals:
        xy = np.array([p.to_float() for p in terminals])
        ax.plot(xy[:, 0], xy[:, 1], "o", ms=3, color=TERMINAL, zorder=3)
    if sub.bbox is not None:
        ax.set_xlim(float(sub.bbox.xmin), float(sub.bbox.xmax))
        ax.set_ylim(float(sub.bbox.ymin), float(sub.bbox.ymax))
    else:
        ax.autoscale_view()


def _draw_tree(ax, tree: Tree, coords, steiner_node=None):
    if not tree.edges:
        raise ValueError("empty tree")
    plain, added = [], []
    for e in tree.edges:
        seg = [coords[e.u], coords[e.v]]
        (added if steiner_node in (e.u, e.v) else plain).append(seg)
    ax.add_collection(LineCollection(plain, colors=TERMINAL, linewidths=1.0))
    if added:
        ax.add_collection(LineCollection(added, colors=ADDED, linewidths=1.4, linestyles="--"))
    term = np.array([coords[k] for k in coords if k != steiner_node])
    ax.plot(term[:, 0], term[:, 1], "o", ms=4, color=TERMINAL, zorder=3)
    if steiner_node is not None and steiner_node in coords:
        sx, sy = coords[steiner_node]
        ax.plot([sx], [sy], "D", ms=6, color=STEINER, zorder=4)
    ax.autoscale_view()
    ax.margins(0.05)


def render_svg(obj, path, terminals=None) -> None:
    """Write ``obj`` (Subdivision, Tree or SteinerSolution) to ``path`` as SVG.

    A bare Tree needs ``terminals`` to know where its nodes are.
    """
    fig, ax = _new()
    try:
        if isinstance(obj, Subdivision):
            if not obj.faces:
                raise ValueError("empty subdivision")
            _draw_subdivision(ax, obj, terminals)
        elif isinstance(obj, SteinerSolution):
            coords = {k + 1: p.to_float() for k, p in enumerate(obj.terminals)}
            sid = None
            if obj.steiner is not None:
                sid = len(obj.terminals) + 1
                coords[sid] = obj.steiner.to_float()
            _draw_tree(ax, obj.tree, coords, sid)
            ax.set_title(f"length {obj.length:.4f}  (MST {obj.mst_length:.4f})", fontsize=9)
        elif isinstance(obj, Tree):
            if terminals is None:
                raise ValueError("rendering a Tree needs the terminal coordinates")
            coords = {k + 1: p.to_float() for k, p in enumerate(terminals)}
            _draw_tree(ax, obj, coords)
        else:
            raise TypeError(f"cannot render {type(obj).__name__}")
        fig.savefig(path, format="svg", bbox_inches="tight")
    finally:
        plt.close(fig)


def plot_bench(summary, stem) -> list:
    """Summary figures next to a bench CSV; returns the written paths.

    ``summary`` maps n to a dict of per-size means.
    """
    sizes = sorted(summary)
    if not sizes:
        return []
    col = lambda key: np.array([summary[n][key] for n in sizes], dtype=float)  # noqa: E731
    written = []

    def save(fig, name):
        path = f"{stem}_{name}.png"
        fig.savefig(path, dpi=150, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

    with mpl.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(sizes, col("faces"), "o-", label="refined OOVD (merged)")
        ax.plot(sizes, col("faces_premerge"), "s--", label="arrangement faces")
        ax.set_xlabel("terminals n")
        ax.set_ylabel("faces")
        ax.legend()
        save(fig, "faces")

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.semilogy(sizes, col("buckets_bruteforce"), "o-", label="all 3- and 4-subsets")
        ax.semilogy(sizes, col("buckets_naive35"), "s-", label="35 per face")
        ax.semilogy(sizes, col("buckets_pruned"), "^-", label="pruned")
        ax.set_xlabel("terminals n")
        ax.set_ylabel("buckets")
        ax.legend()
        save(fig, "buckets")

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(sizes, col("improvement_pct"), "o-")
        ax.set_xlabel("terminals n")
        ax.set_ylabel("length reduction vs MST (%)")
        save(fig, "improvement")

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(sizes, col("add_delete_ratio"), "o-")
        ax.set_xlabel("terminals n")
        ax.set_ylabel("added / deleted edge length")
        save(fig, "ratio")

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(sizes, col("same_triangle"), "o-")
        ax.set_ylim(0, 1)
        ax.set_xlabel("terminals n")
        ax.set_ylabel("proportion with adjacent deleted edges")
        save(fig, "same_triangle")
    return written
