"""Figures for segmentation and evaluation reports."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .evaluation import EvalReport  # noqa: E402
from .segmentation import SegmentationResult  # noqa: E402

STYLE = {
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "polytopic",
}


def plot_segmentation(result: SegmentationResult, chords: Sequence[int], path: str | Path,
                      reference: Optional[Sequence[int]] = None, title: Optional[str] = None) -> Path:
    """Chord index per beat, estimated frontiers (solid) and reference ones (dashed)."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, (ax, ax_cost) = plt.subplots(2, 1, figsize=(10, 4), sharex=True,
                                          gridspec_kw={"height_ratios": [3, 1]})
        beats = range(1, len(chords) + 1)
        ax.step(beats, chords, where="mid", color="0.3", lw=1)
        ax.set_ylabel("chord index")
        ax.set_ylim(-1, 24)
        for f in result.frontiers:
            ax.axvline(f - 0.5, color="tab:red", lw=1.2)
        for f in reference or ():
            ax.axvline(f - 0.5, color="tab:blue", lw=1.2, ls="--")
        for seg in result.segments:
            ax_cost.bar(seg.start - 0.5, seg.cost / seg.size, width=seg.size, align="edge",
                        color="tab:orange", edgecolor="white")
        ax_cost.set_ylabel("cost/beat")
        ax_cost.set_xlabel("beat")
        ax.set_title(title or (result.song_id or "segmentation"))
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None} if path.suffix == ".svg" else None)
        plt.close(fig)
    return path


def plot_corpus_scores(report: EvalReport, path: str | Path) -> Path:
    """Per-song F1 at each tolerance, with the corpus mean as a horizontal line."""
    path = Path(path)
    with plt.rc_context(STYLE):
        n = len(report.songs)
        fig, ax = plt.subplots(figsize=(max(4, 0.35 * n + 2), 3))
        width = 0.8 / max(len(report.tolerances), 1)
        for k, t in enumerate(report.tolerances):
            xs = [i + k * width for i in range(n)]
            ax.bar(xs, [s.scores[t].f1 for s in report.songs], width=width, label=f"F_{t}")
            ax.axhline(report.mean(t).f1, color=f"C{k}", lw=1, ls=":")
        ax.set_xticks([i + 0.4 - width / 2 for i in range(n)])
        ax.set_xticklabels([str(s.song_id) for s in report.songs], rotation=90, fontsize=7)
        ax.set_ylim(0, 1.05)
        ax.set_ylabel("F1")
        ax.legend(frameon=False, ncol=len(report.tolerances))
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
