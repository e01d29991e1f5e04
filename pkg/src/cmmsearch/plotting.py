"""Occurrence-map figures for locate reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .pipeline import LocateReport  # noqa: E402


def plot_occurrences(report: LocateReport, path, text_length: int | None = None):
    """Draw match positions along the searched text and save to ``path``.

    Top panel marks each occurrence as a span; bottom panel is the gap
    between consecutive starts, which makes tandem repeats stand out as
    runs at gap == pattern length.
    """
    occ = report.occurrences
    n = text_length if text_length is not None else occ.text_length
    L = occ.pattern_length
    starts = list(occ.starts)

    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(8, 3.6), sharex=True,
                                   gridspec_kw={"height_ratios": [1, 2]})
    ax0.broken_barh([(p, L) for p in starts], (0, 1), facecolors="C0")
    ax0.set_xlim(1, max(n, 1) + 1)
    ax0.set_yticks([])
    ax0.set_title(f"{report.pattern} in {report.accession_or_file}: {len(starts)} occurrences", fontsize=10)

    if len(starts) > 1:
        gaps = [b - a for a, b in zip(starts, starts[1:])]
        ax1.plot(starts[1:], gaps, "o", ms=3)
        ax1.axhline(L, color="0.6", lw=0.8, ls="--")
    ax1.set_ylabel("gap to previous")
    ax1.set_xlabel("position")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
