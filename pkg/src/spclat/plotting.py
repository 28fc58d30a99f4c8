"""Hasse diagram rendering with matplotlib (Agg, no display needed)."""
from __future__ import annotations

from collections import defaultdict

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import FancyArrowPatch

from .poset import Poset


def hasse_layout(p: Poset) -> dict[int, tuple[float, float]]:
    """Rank by longest chain from below; order each rank by the mean x of lower covers."""
    ranks = p.height_ranks()
    levels = defaultdict(list)
    for i, r in enumerate(ranks):
        levels[r].append(i)
    below = defaultdict(list)
    for x, y in p.hasse_covers():
        below[y].append(x)
    pos: dict[int, tuple[float, float]] = {}
    for r in sorted(levels):
        row = levels[r]
        if r > 0:
            def bary(i):
                xs = [pos[j][0] for j in below[i] if j in pos]
                return (sum(xs) / len(xs) if xs else 0.0, i)
            row = sorted(row, key=bary)
        width = len(row)
        for k, i in enumerate(row):
            pos[i] = (k - (width - 1) / 2, float(r))
    return pos


def _passes_through(a, b, pts, tol=0.08) -> bool:
    """Whether segment a-b runs over one of pts (other than its ends)."""
    (x0, y0), (x1, y1) = a, b
    dx, dy = x1 - x0, y1 - y0
    length2 = dx * dx + dy * dy
    for px, py in pts:
        if (px, py) in (a, b):
            continue
        t = ((px - x0) * dx + (py - y0) * dy) / length2
        if 0 < t < 1 and (x0 + t * dx - px) ** 2 + (y0 + t * dy - py) ** 2 < tol * tol:
            return True
    return False


def render_hasse(p: Poset, path, title: str = "", highlight=()) -> str:
    """Write the Hasse diagram of p to ``path`` (format from the suffix)."""
    pos = hasse_layout(p)
    height = max((y for _, y in pos.values()), default=0)
    fig = Figure(figsize=(3.2, 1.2 + 0.9 * height))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    pts = list(pos.values())
    for x, y in p.hasse_covers():
        a, b = pos[x], pos[y]
        # bend edges that would otherwise be read as two covers
        rad = 0.3 if _passes_through(a, b, pts) else 0.0
        ax.add_patch(FancyArrowPatch(a, b, arrowstyle="-", connectionstyle=f"arc3,rad={rad}",
                                     color="0.3", linewidth=1.2, zorder=1))
    marked = set(highlight)
    for i, (x, y) in pos.items():
        face = "#f4a261" if i in marked else "white"
        ax.annotate(p.labels[i], (x, y), ha="center", va="center", fontsize=8, zorder=3,
                    bbox=dict(boxstyle="round,pad=0.35", facecolor=face, edgecolor="black"))
    xs = [x for x, _ in pts] or [0.0]
    ax.set_xlim(min(xs) - 0.8, max(xs) + 0.8)
    ax.set_ylim(-0.6, height + 0.6)
    if title:
        ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    return str(path)
