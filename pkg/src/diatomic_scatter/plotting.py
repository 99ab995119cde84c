"""Self-contained SVG line plots of sweep rows."""
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["PlotSpec", "build_figure", "emit_svg"]

_RC = {
    "svg.hashsalt": "diatomic-scatter",
    "svg.fonttype": "path",
    "path.simplify": False,
}


@dataclass
class PlotSpec:
    xlabel: str = "parameter"
    ylabel: str = "j"
    title: str = None
    log_x: bool = False
    markers: list = field(default_factory=list)
    marker_labels: list = None
    include: tuple = ("re", "tr", "total")


def _columns(rows, include):
    n_c = max(r.n_c for r in rows)
    cols = []
    for kind in ("re", "tr"):
        if kind not in include:
            continue
        for n in range(n_c + 1):
            vals = [getattr(r, f"j_{kind}")[n] if n < len(getattr(r, f"j_{kind}")) else 0.0
                    for r in rows]
            cols.append((f"$j_{{{n}}}^{{\\rm {kind}}}$", f"j{kind}-{n}", np.array(vals, dtype=float)))
    if "total" in include:
        cols.append(("j_total", "jtotal", np.array([r.j_total for r in rows], dtype=float)))
    return cols


def build_figure(rows, spec):
    """Matplotlib figure for ``rows``; one line per j column plus j_total."""
    if len(rows) < 2:
        raise ValueError("a line plot needs at least two rows")
    x = np.array([r.param for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, gid, y in _columns(rows, spec.include):
        (line,) = ax.plot(x, y, label=label, lw=1.4)
        line.set_gid(f"series-{gid}")
    if spec.log_x:
        ax.set_xscale("log")
    for i, xm in enumerate(spec.markers):
        vline = ax.axvline(xm, color="0.4", ls="--", lw=0.9)
        vline.set_gid(f"threshold-marker-{i + 1}")
        if spec.marker_labels:
            ax.annotate(spec.marker_labels[i], (xm, 1.0), xycoords=("data", "axes fraction"),
                        xytext=(2, -10), textcoords="offset points", fontsize=8, color="0.3")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    return fig


def emit_svg(rows, path, spec=None):
    """Render ``rows`` to a standalone SVG file; output is byte-reproducible."""
    spec = PlotSpec() if spec is None else spec
    with plt.rc_context(_RC):
        fig = build_figure(rows, spec)
        try:
            fig.savefig(path, format="svg", metadata={"Date": None, "Creator": "diatomic-scatter"})
        finally:
            plt.close(fig)
    return path
