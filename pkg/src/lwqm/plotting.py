"""PNG rendering of sampled curves (matplotlib, non-interactive backend)."""

from __future__ import annotations

import io
import math
from typing import Optional, Sequence

from .export import TableArtifact, write_atomic


def _finite_max(vals) -> float:
    m = max((abs(v) for v in vals if isinstance(v, float) and math.isfinite(v)), default=0.0)
    return m if m > 0 else 1.0


def render_png(table: TableArtifact, title: str = "", scale_each: bool = False,
               columns: Optional[Sequence[str]] = None, ylim: Optional[tuple] = None) -> bytes:
    """Line plot of every column against the first one.

    With ``scale_each`` each curve is divided by its largest finite magnitude,
    so curves of very different size share one frame.
    """
    import matplotlib
    matplotlib.use("Agg")
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.4, 4.2), dpi=110)
    ax = fig.add_subplot(1, 1, 1)
    xname = table.columns[0]
    xs = table.column(xname)
    for name in columns or table.columns[1:]:
        ys = table.column(name)
        if scale_each:
            m = _finite_max(ys)
            ys = [y / m for y in ys]
            name = f"{name} (scaled)"
        ax.plot(xs, ys, label=name, linewidth=1.2)
    ax.set_xlabel(xname)
    if ylim is not None:
        ax.set_ylim(*ylim)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    buf = io.BytesIO()
    # fixed metadata keeps the bytes reproducible
    fig.savefig(buf, format="png", metadata={"Software": None})
    return buf.getvalue()


def save_png(table: TableArtifact, path, **kw) -> None:
    write_atomic(path, render_png(table, **kw))
