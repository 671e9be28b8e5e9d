"""Deterministic SVG rendering for the canonical figures.

Matplotlib's SVG backend salts internal element ids with svg.hashsalt and
stamps a creation date; both are pinned here so repeated renders of the same
data are byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "orbmag"

_SERIES_XLABEL = r"$\gamma t$"
_SWEEP_XLABEL = r"$\gamma$"
_YLABEL = r"$M_z$  [$q\hbar/mc$]"


def render_figure(spec, curve_data, out_path) -> None:
    """Render one figure to SVG. curve_data is a list of (label, x, y) in
    the same order as spec.curves."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for label, x, y in curve_data:
            ax.plot(x, y, label=label, linewidth=1.2)
        ax.set_xlabel(_SERIES_XLABEL if spec.kind == "series"
                      else _SWEEP_XLABEL)
        ax.set_ylabel(_YLABEL)
        ax.set_title(spec.figure_id)
        ax.legend(loc="best")
        ax.grid(True, alpha=0.3)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
