"""Optimal segmentation of a chord sequence by dynamic programming."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .chords import Chord
from .cost import CostConfig, batch_passage_costs, regularity_penalty
from .shapes import enumerate_shapes

__all__ = [
    "SegmentationConfig",
    "Segment",
    "SegmentationResult",
    "InfeasibleSegmentationError",
    "segment_song",
    "segment_cost_table",
    "corpus_run",
]

logger = logging.getLogger(__name__)


class InfeasibleSegmentationError(ValueError):
    """No partition of the song fits the segment size bounds."""


@dataclass(frozen=True)
class SegmentationConfig:
    cost: CostConfig = field(default_factory=CostConfig)
    min_size: int = 2
    max_size: int = 40

    def __post_init__(self):
        if not 1 <= self.min_size <= self.max_size:
            raise ValueError(f"need 1 <= min_size <= max_size, got [{self.min_size}, {self.max_size}]")
        n = self.cost.max_dim
        limit = (1 << n) + (1 << max(n - 2, 0))
        if self.max_size > limit:
            raise ValueError(f"max_size {self.max_size} exceeds {limit}, the largest polytope with dimension <= {n}")


@dataclass(frozen=True)
class Segment:
    start: int  # 1-based, inclusive
    end: int  # 1-based, inclusive
    cost: float
    shape: str

    @property
    def size(self) -> int:
        return self.end - self.start + 1


@dataclass
class SegmentationResult:
    frontiers: list[int]
    segments: list[Segment]
    total_cost: float
    song_id: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.song_id,
            "frontiers": list(self.frontiers),
            "total_cost": self.total_cost,
            "segments": [
                {"start": s.start, "end": s.end, "size": s.size, "cost": s.cost, "shape": s.shape}
                for s in self.segments
            ],
        }


def _as_indices(sequence: Sequence[Chord] | np.ndarray) -> np.ndarray:
    if isinstance(sequence, np.ndarray):
        return sequence.astype(np.int64)
    return np.array([c.index if isinstance(c, Chord) else int(c) for c in sequence], dtype=np.int64)


def segment_cost_table(chords: np.ndarray, config: SegmentationConfig) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Segment cost of every (start, size) pair allowed by the bounds.

    ``table[size] = (costs, shape_index)`` with one entry per 0-based start.
    """
    table = {}
    T = len(chords)
    for size in range(config.min_size, min(config.max_size, T) + 1):
        windows = sliding_window_view(chords, size)
        costs, choice = batch_passage_costs(windows, config.cost)
        table[size] = (costs + regularity_penalty(size, config.cost), choice)
    return table


def segment_song(sequence: Sequence[Chord] | np.ndarray, config: SegmentationConfig | None = None,
                 song_id: Optional[str] = None) -> SegmentationResult:
    """Partition the song into segments of minimal total penalised cost.

    Ties go to fewer segments, then to the earlier start of the last segment.
    """
    config = config or SegmentationConfig()
    chords = _as_indices(sequence)
    T = len(chords)
    if T < 1:
        raise ValueError("cannot segment an empty sequence")
    table = segment_cost_table(chords, config)

    best = [math.inf] * (T + 1)
    count = [0] * (T + 1)
    back = [0] * (T + 1)
    best[0] = 0.0
    for t in range(1, T + 1):
        # largest size first so equal (cost, count) keeps the earliest boundary
        for size in range(min(config.max_size, t), config.min_size - 1, -1):
            prev = best[t - size]
            if prev == math.inf:
                continue
            cost = prev + table[size][0][t - size]
            if cost < best[t] or (cost == best[t] and count[t - size] + 1 < count[t]):
                best[t], count[t], back[t] = cost, count[t - size] + 1, size
    if best[T] == math.inf:
        raise InfeasibleSegmentationError(
            f"no segmentation of {T} beats with sizes in [{config.min_size}, {config.max_size}]")

    segments = []
    t = T
    while t > 0:
        size = back[t]
        start = t - size
        costs, choice = table[size]
        shape = enumerate_shapes(size, config.cost.max_dim)[choice[start]]
        segments.append(Segment(start + 1, t, float(costs[start]), shape.nested()))
        t = start
    segments.reverse()
    frontiers = [s.start for s in segments[1:]]
    return SegmentationResult(frontiers, segments, float(best[T]), song_id)


def _run_one(args):
    sequence, config, song_id = args
    try:
        return segment_song(sequence, config, song_id)
    except Exception as err:  # collected per song, reported by the caller
        return err


def corpus_run(songs: Sequence, config: SegmentationConfig | None = None, jobs: int = 1,
               ids: Optional[Sequence[str]] = None) -> list:
    """Segment every song; failures come back as exception instances in place.

    Output order matches input order whatever ``jobs`` is.
    """
    config = config or SegmentationConfig()
    ids = list(ids) if ids is not None else [None] * len(songs)
    tasks = [(_as_indices(s), config, i) for s, i in zip(songs, ids)]
    if jobs <= 1 or len(tasks) <= 1:
        results = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    for song_id, res in zip(ids, results):
        if isinstance(res, Exception):
            logger.warning("song %s failed: %s", song_id, res)
    return results
