"""Matplotlib renderings of the report outputs (AR quivers, functor
grids, tensor tables), written to image files alongside the text output."""

from __future__ import annotations


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _layered_positions(n: int, edges: list[tuple[int, int]]) -> dict[int, tuple[float, float]]:
    """Longest-path layering for an acyclic arrow digraph; circular layout
    when a cycle is present."""
    import math

    adj = {i: [] for i in range(n)}
    indeg = {i: 0 for i in range(n)}
    for a, b in set(edges):
        adj[a].append(b)
        indeg[b] += 1
    # Kahn's algorithm to detect cycles and compute layers
    layer = {i: 0 for i in range(n)}
    queue = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    pending = dict(indeg)
    while queue:
        v = queue.pop(0)
        seen += 1
        for w in adj[v]:
            layer[w] = max(layer[w], layer[v] + 1)
            pending[w] -= 1
            if pending[w] == 0:
                queue.append(w)
    if seen < n:
        return {
            i: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
            for i in range(n)
        }
    by_layer: dict[int, list[int]] = {}
    for i in range(n):
        by_layer.setdefault(layer[i], []).append(i)
    pos = {}
    for lx, nodes in sorted(by_layer.items()):
        for k, i in enumerate(sorted(nodes)):
            pos[i] = (float(lx), k - (len(nodes) - 1) / 2.0)
    return pos


def render_ar_quiver(labels, counts, tau_edges, path: str, title: str = "AR quiver"):
    """Draw nodes with labels, solid irreducible arrows (with multiplicity)
    and dotted translate edges, and save the figure."""
    plt = _plt()
    n = len(labels)
    edges = []
    for i in range(n):
        for j in range(n):
            if counts and counts[i][j]:
                edges.append((i, j))
    pos = _layered_positions(n, edges)
    fig, ax = plt.subplots(figsize=(max(6, 1.6 * n**0.9 / 2), max(4, n * 0.5)))
    for i in range(n):
        for j in range(n):
            mult = counts[i][j] if counts else 0
            if not mult:
                continue
            label = "" if mult == 1 else f"x{mult}"
            ax.annotate(
                label,
                xy=pos[j],
                xytext=pos[i],
                arrowprops=dict(arrowstyle="-|>", color="black", shrinkA=16, shrinkB=16),
                fontsize=8,
                ha="center",
            )
    for right, left in tau_edges:
        ax.annotate(
            "",
            xy=pos[left],
            xytext=pos[right],
            arrowprops=dict(
                arrowstyle="-|>", color="gray", linestyle="dotted", shrinkA=16, shrinkB=16
            ),
        )
    for i, lbl in enumerate(labels):
        ax.text(
            pos[i][0],
            pos[i][1],
            lbl,
            ha="center",
            va="center",
            fontsize=9,
            bbox=dict(boxstyle="round", facecolor="white", edgecolor="black"),
        )
    ax.set_title(title)
    ax.set_axis_off()
    xs = [p[0] for p in pos.values()] or [0]
    ys = [p[1] for p in pos.values()] or [0]
    ax.set_xlim(min(xs) - 0.7, max(xs) + 0.7)
    ax.set_ylim(min(ys) - 0.7, max(ys) + 0.7)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def render_table(row_labels, col_labels, cells, path: str, title: str):
    """Render a text table (tensor table or functor grid) as a figure."""
    plt = _plt()
    nrows = len(row_labels)
    ncols = len(col_labels)
    fig, ax = plt.subplots(figsize=(max(6, 1.3 * ncols), max(3, 0.45 * nrows + 1)))
    ax.set_axis_off()
    table = ax.table(
        cellText=[[str(c) for c in row] for row in cells],
        rowLabels=row_labels,
        colLabels=col_labels,
        loc="center",
        cellLoc="center",
    )
    table.auto_set_font_size(False)
    table.set_fontsize(8)
    table.scale(1, 1.3)
    ax.set_title(title)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
