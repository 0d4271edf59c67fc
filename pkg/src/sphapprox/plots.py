"""Render sweep records as log-log figures saved next to the CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

__all__ = ["render_records"]

_YLABEL = {
    "operator_norm": "operator norm",
    "lp_error": "approximation error",
    "defect": "exactness defect",
    "ratio": "ratio",
}


def render_records(records, path, title: str | None = None) -> None:
    """One log-log line per (experiment, filter) group over the L sweep.

    Slope/summary rows (L = 0) are skipped; the figure lands at `path` in
    whatever format its suffix selects.
    """
    groups: dict[tuple[str, str, str], list] = {}
    for rec in records:
        if rec.L < 1:
            continue
        groups.setdefault((rec.experiment, rec.filter, rec.value_kind), []).append(rec)
    if not groups:
        raise ValueError("nothing to plot: no records with L >= 1")

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    kinds = set()
    for (experiment, filt, kind), recs in sorted(groups.items()):
        recs = sorted(recs, key=lambda r: r.L)
        ax.loglog(
            [r.L for r in recs],
            [r.value for r in recs],
            marker="o",
            markersize=3.5,
            label=f"{experiment} {filt}",
        )
        kinds.add(kind)
    ax.set_xlabel("degree parameter L")
    ax.set_ylabel(" / ".join(sorted(_YLABEL.get(k, k) for k in kinds)))
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
