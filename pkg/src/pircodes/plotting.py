"""Overhead heatmap of a bound table."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bounds import BoundTable, ComparisonReport  # noqa: E402

# Drop timestamps and version strings so repeated runs write identical files.
_STABLE_METADATA = {
    "png": {"Software": None},
    "pdf": {"Creator": None, "Producer": None, "CreationDate": None},
    "svg": {"Creator": None, "Date": None},
}

_MARKS = {"match": "", "ours-stronger": "+", "ours-weaker": "-", "missing": "?"}


def overhead_heatmap(table: BoundTable, path, report: ComparisonReport | None = None) -> None:
    """Write a heatmap of m/s with m printed in each cell.  With a report,
    cells that differ from the reference get a +/- suffix."""
    s_lo, s_hi = table.s_range
    k_lo, k_hi = table.k_range
    grid = np.full((s_hi - s_lo + 1, k_hi - k_lo + 1), np.nan)
    for (s, k), e in table.entries.items():
        grid[s - s_lo, k - k_lo] = e.m / e.s
    status = {(c.s, c.k): c.status for c in report.cells} if report else {}

    fig, ax = plt.subplots(figsize=(1.1 * grid.shape[1] + 2, 0.28 * grid.shape[0] + 1.5))
    im = ax.imshow(grid, aspect="auto", cmap="viridis", origin="upper")
    for (s, k), e in sorted(table.entries.items()):
        mark = _MARKS.get(status.get((s, k), "match"), "")
        ax.text(k - k_lo, s - s_lo, f"{e.m}{mark}", ha="center", va="center", fontsize=7, color="white")
    ax.set_xticks(range(grid.shape[1]), [str(k) for k in range(k_lo, k_hi + 1)])
    ax.set_yticks(range(grid.shape[0]), [str(s) for s in range(s_lo, s_hi + 1)], fontsize=7)
    ax.set_xlabel("k")
    ax.set_ylabel("s")
    ax.set_title("storage overhead m/s")
    fig.colorbar(im, ax=ax, label="m/s")
    fig.tight_layout()
    suffix = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_STABLE_METADATA.get(suffix))
    plt.close(fig)
