"""Frontier evaluation: tolerance matching, precision/recall/F1, corpus tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

__all__ = [
    "MatchCounts",
    "Scores",
    "SongScores",
    "EvalReport",
    "match_frontiers",
    "score",
    "evaluate_corpus",
    "DEFAULT_TOLERANCES",
]

DEFAULT_TOLERANCES = (0, 3)


@dataclass(frozen=True)
class MatchCounts:
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


def _check_sorted(values: Sequence[int], name: str):
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} frontiers must be strictly increasing: {list(values)}")


def match_frontiers(estimated: Sequence[int], reference: Sequence[int], tolerance: int) -> MatchCounts:
    """One-to-one matching of frontiers within ``tolerance`` beats.

    Candidate pairs are taken greedily by increasing distance; equal distances
    go to the earlier reference frontier, then to the earlier estimate.
    """
    estimated, reference = list(estimated), list(reference)
    _check_sorted(estimated, "estimated")
    _check_sorted(reference, "reference")
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    pairs = sorted(
        (abs(e - r), ri, ei)
        for ri, r in enumerate(reference)
        for ei, e in enumerate(estimated)
        if abs(e - r) <= tolerance
    )
    used_est, used_ref = set(), set()
    for _, ri, ei in pairs:
        if ri in used_ref or ei in used_est:
            continue
        used_ref.add(ri)
        used_est.add(ei)
    tp = len(used_ref)
    return MatchCounts(tp, len(estimated) - tp, len(reference) - tp)


def score(counts: MatchCounts) -> Scores:
    """Precision, recall and F1; a song with no frontier on either side scores 1."""
    tp, fp, fn = counts.tp, counts.fp, counts.fn
    if min(tp, fp, fn) < 0:
        raise ValueError(f"negative counts: {counts}")
    if tp == fp == fn == 0:
        return Scores(1.0, 1.0, 1.0)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Scores(precision, recall, f1)


@dataclass
class SongScores:
    song_id: Optional[str]
    counts: dict[int, MatchCounts]
    scores: dict[int, Scores]


@dataclass
class EvalReport:
    tolerances: tuple[int, ...]
    songs: list[SongScores] = field(default_factory=list)

    def mean(self, tolerance: int) -> Scores:
        if not self.songs:
            return Scores(0.0, 0.0, 0.0)
        n = len(self.songs)
        per = [s.scores[tolerance] for s in self.songs]
        return Scores(sum(p.precision for p in per) / n,
                      sum(p.recall for p in per) / n,
                      sum(p.f1 for p in per) / n)

    def columns(self) -> list[str]:
        return [f"{m}_{t}" for t in self.tolerances for m in ("P", "R", "F")]

    def to_dict(self) -> dict:
        return {
            "tolerances": list(self.tolerances),
            "corpus": {str(t): vars(self.mean(t)) for t in self.tolerances},
            "songs": [
                {
                    "id": s.song_id,
                    **{str(t): {**vars(s.counts[t]), **vars(s.scores[t])} for t in self.tolerances},
                }
                for s in self.songs
            ],
        }

    def rows(self) -> list[list[str]]:
        """Header plus one row per song plus the corpus mean, percentages."""
        def cells(scores: dict[int, Scores]) -> list[str]:
            out = []
            for t in self.tolerances:
                s = scores[t]
                out += [f"{100 * s.precision:.1f}", f"{100 * s.recall:.1f}", f"{100 * s.f1:.1f}"]
            return out

        rows = [["song"] + self.columns()]
        for s in self.songs:
            rows.append([str(s.song_id)] + cells(s.scores))
        rows.append(["mean"] + cells({t: self.mean(t) for t in self.tolerances}))
        return rows

    def to_table(self) -> str:
        rows = self.rows()
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = []
        for k, row in enumerate(rows):
            lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))))
            if k == 0 or k == len(rows) - 2:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines)


def evaluate_corpus(estimated: Sequence[Sequence[int]], references: Sequence[Sequence[int]],
                    tolerances: Iterable[int] = DEFAULT_TOLERANCES,
                    ids: Optional[Sequence[Optional[str]]] = None) -> EvalReport:
    """Per-song scores and their unweighted means at every tolerance."""
    if len(estimated) != len(references):
        raise ValueError(f"{len(estimated)} estimations for {len(references)} references")
    tolerances = tuple(tolerances)
    ids = list(ids) if ids is not None else [None] * len(estimated)
    report = EvalReport(tolerances)
    for song_id, est, ref in zip(ids, estimated, references):
        counts = {t: match_frontiers(est, ref, t) for t in tolerances}
        report.songs.append(SongScores(song_id, counts, {t: score(c) for t, c in counts.items()}))
    return report
