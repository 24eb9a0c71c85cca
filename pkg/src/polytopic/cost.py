"""Polytopic compression cost of chord passages.

Every vertex costs 0 or 1. The primer always costs 1. An under-primer costs 1
when it differs from the primer. Any other vertex costs 0 when one of its
valid antecedents ``a_j`` implies it, i.e. when the relation primer -> a_j
equals the relation pivot -> vertex; otherwise it is a contrast, costs 1, and
each of its successors keeps only this vertex (and its pivot) as valid
antecedents.

:func:`polytope_cost` is the readable per-passage version. :func:`batch_raw_costs`
evaluates one vertex graph over many passages at once with numpy and is what
the segmenter uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .chords import Chord
from .relations import RelationSystem, get_system
from .shapes import DEFAULT_MAX_DIM, PolytopeShape, VertexGraph, build_vertex_graph, enumerate_shapes

__all__ = [
    "CostConfig",
    "CostBreakdown",
    "PassageLengthError",
    "square_cost",
    "polytope_cost",
    "passage_cost",
    "segment_cost",
    "alteration_penalty",
    "regularity_penalty",
    "batch_raw_costs",
    "batch_passage_costs",
]

TARGET_SIZE = 32


class PassageLengthError(ValueError):
    """The passage does not fit the polytope it is laid onto."""


@dataclass(frozen=True)
class CostConfig:
    """Penalised cost settings.

    ``pa_addition``/``pa_deletion`` and ``pr_above``/``pr_below`` optionally
    split the alteration and regularity penalties by kind; when left to None
    they fall back to ``pa`` and ``pr``.
    """

    relations: str = "triad_circle"
    pa: float = 3.0
    pr: float = 0.1
    target_size: int = TARGET_SIZE
    max_dim: int = DEFAULT_MAX_DIM
    pa_addition: Optional[float] = None
    pa_deletion: Optional[float] = None
    pr_above: Optional[float] = None
    pr_below: Optional[float] = None

    def __post_init__(self):
        for name in ("pa", "pr", "pa_addition", "pa_deletion", "pr_above", "pr_below"):
            value = getattr(self, name)
            if value is not None and not value >= 0:
                raise ValueError(f"{name} must be a non-negative number, got {value}")
        if self.target_size < 1:
            raise ValueError("target_size must be >= 1")

    @property
    def system(self) -> RelationSystem:
        return get_system(self.relations)


@dataclass
class CostBreakdown:
    raw_cost: int
    vertex_costs: list[int]
    shape: PolytopeShape
    contrastive: list[bool] = field(default_factory=list)
    alteration_penalty: float = 0.0

    @property
    def cost(self) -> float:
        return self.raw_cost + self.alteration_penalty

    def to_dict(self) -> dict:
        return {
            "shape": self.shape.nested(),
            "raw_cost": self.raw_cost,
            "alteration_penalty": self.alteration_penalty,
            "vertex_costs": list(self.vertex_costs),
            "contrastive": [i + 1 for i, c in enumerate(self.contrastive) if c],
        }


def _indices(passage: Sequence[Chord] | np.ndarray) -> list[int]:
    return [c.index if isinstance(c, Chord) else int(c) for c in passage]


def square_cost(passage: Sequence[Chord], system: RelationSystem) -> CostBreakdown:
    """Cost of four chords on a square, straight from the System & Contrast rule."""
    if len(passage) != 4:
        raise PassageLengthError(f"a square holds 4 chords, got {len(passage)}")
    a1, a2, a3, a4 = _indices(passage)
    costs = [1, int(a2 != a1), int(a3 != a1), int(system.between[a1, a2] != system.between[a3, a4])]
    return CostBreakdown(sum(costs), costs, PolytopeShape(2), [False, False, False, bool(costs[3])])


def polytope_cost(passage: Sequence[Chord], graph: VertexGraph | PolytopeShape,
                  system: RelationSystem) -> CostBreakdown:
    """Raw cost of a passage laid on a polytope, vertex by vertex."""
    if isinstance(graph, PolytopeShape):
        graph = build_vertex_graph(graph)
    chords = _indices(passage)
    if len(chords) != len(graph):
        raise PassageLengthError(f"passage of {len(chords)} chords on a {len(graph)}-vertex polytope")
    rel = system.between
    primer = chords[0]
    valid = [set(a) for a in graph.antecedents]
    costs = [0] * len(chords)
    contrastive = [False] * len(chords)
    costs[0] = 1
    for i in range(1, len(chords)):
        if valid[i] == {0}:
            costs[i] = int(chords[i] != primer)
            continue
        pivots = dict(zip(graph.antecedents[i], graph.pivots[i]))
        implied = any(rel[primer, chords[j]] == rel[chords[pivots[j]], chords[i]] for j in valid[i])
        if not implied:
            costs[i] = 1
            contrastive[i] = True
            for s, p in zip(graph.successors[i], graph.successor_pivots[i]):
                valid[s] &= {i, p}
    return CostBreakdown(sum(costs), costs, graph.shape, contrastive)


def alteration_penalty(shape: PolytopeShape, config: CostConfig) -> float:
    pa_add = config.pa if config.pa_addition is None else config.pa_addition
    pa_del = config.pa if config.pa_deletion is None else config.pa_deletion
    return (pa_add if shape.addition is not None else 0.0) + (pa_del if shape.deletion is not None else 0.0)


def regularity_penalty(size: int, config: CostConfig) -> float:
    gap = size - config.target_size
    if gap >= 0:
        weight = config.pr if config.pr_above is None else config.pr_above
    else:
        weight = config.pr if config.pr_below is None else config.pr_below
    return weight * abs(gap)


def passage_cost(passage: Sequence[Chord], config: CostConfig) -> tuple[float, Optional[CostBreakdown]]:
    """Best raw cost plus alteration penalty over every shape of the passage's size.

    Returns ``(inf, None)`` when no shape has that many vertices. Ties keep the
    first shape in enumeration order.
    """
    system = config.system
    best, best_breakdown = math.inf, None
    for shape in enumerate_shapes(len(passage), config.max_dim):
        breakdown = polytope_cost(passage, shape, system)
        breakdown.alteration_penalty = alteration_penalty(shape, config)
        if breakdown.raw_cost + breakdown.alteration_penalty < best:
            best, best_breakdown = breakdown.raw_cost + breakdown.alteration_penalty, breakdown
    return best, best_breakdown


def segment_cost(passage: Sequence[Chord], config: CostConfig) -> float:
    cost, _ = passage_cost(passage, config)
    return cost + regularity_penalty(len(passage), config)


class _CompiledGraph:
    """Index arrays for evaluating one vertex graph over many passages."""

    def __init__(self, graph: VertexGraph):
        self.size = len(graph)
        self.steps = []
        for i in range(1, self.size):
            ants = graph.antecedents[i]
            if ants == (0,):
                self.steps.append((i, None, None, ()))
                continue
            updates = []
            for s, p in zip(graph.successors[i], graph.successor_pivots[i]):
                keep = np.array([a in (i, p) for a in graph.antecedents[s]])
                updates.append((s, keep))
            self.steps.append((i, np.array(ants), np.array(graph.pivots[i]), tuple(updates)))
        self.n_ants = [len(a) for a in graph.antecedents]


_compiled: dict[PolytopeShape, _CompiledGraph] = {}


def _compile(shape: PolytopeShape) -> _CompiledGraph:
    compiled = _compiled.get(shape)
    if compiled is None:
        compiled = _compiled[shape] = _CompiledGraph(build_vertex_graph(shape))
    return compiled


def batch_raw_costs(windows: np.ndarray, shape: PolytopeShape, system: RelationSystem) -> np.ndarray:
    """Raw costs of ``windows`` (passages x vertices, chord indices) on ``shape``."""
    compiled = _compile(shape)
    windows = np.asarray(windows)
    if windows.ndim != 2 or windows.shape[1] != compiled.size:
        raise PassageLengthError(f"expected passages of {compiled.size} chords, got array {windows.shape}")
    rel = system.between
    n = windows.shape[0]
    primer = windows[:, 0]
    total = np.ones(n, dtype=np.int64)
    valid = [np.ones((n, k), dtype=bool) if k else None for k in compiled.n_ants]
    for i, ants, pivots, updates in compiled.steps:
        current = windows[:, i]
        if ants is None:
            total += current != primer
            continue
        from_primer = rel[primer[:, None], windows[:, ants]]
        from_pivot = rel[windows[:, pivots], current[:, None]]
        contrast = ~((from_primer == from_pivot) & valid[i]).any(axis=1)
        total += contrast
        if updates and contrast.any():
            rows = np.flatnonzero(contrast)
            for s, keep in updates:
                valid[s][rows] &= keep
    return total


def batch_passage_costs(windows: np.ndarray, config: CostConfig) -> tuple[np.ndarray, np.ndarray]:
    """Penalised passage costs (without regularity penalty) for equal-size windows.

    Returns ``(costs, shape_index)`` where ``shape_index`` points into
    ``enumerate_shapes(size)``; unreachable sizes give ``inf`` and ``-1``.
    """
    windows = np.asarray(windows)
    n, size = windows.shape
    best = np.full(n, np.inf)
    choice = np.full(n, -1, dtype=np.int64)
    system = config.system
    for k, shape in enumerate(enumerate_shapes(size, config.max_dim)):
        costs = batch_raw_costs(windows, shape, system) + alteration_penalty(shape, config)
        better = costs < best
        best[better] = costs[better]
        choice[better] = k
    return best, choice
