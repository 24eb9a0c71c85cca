"""Regular and irregular polytope shapes, and their compiled vertex graphs.

A shape is an ``n``-hypercube whose base vertices carry the bit vectors
``0 .. 2**n - 1`` (dimension ``k`` has weight ``2**k``). An alteration face is
described by its set of *free* dimensions: it holds every vertex whose bits
are 1 on all the other dimensions, so it always contains the last vertex.
An empty free set is the last vertex alone.

* a deletion face removes its vertices;
* an addition face attaches one new vertex to each of its (surviving)
  vertices. Added vertices are linked to each other along the face's own
  edges.

Chronological order follows the bit-vector value; an added vertex comes right
after the vertex it is attached to.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

__all__ = [
    "PolytopeShape",
    "VertexGraph",
    "ShapeParseError",
    "enumerate_shapes",
    "build_vertex_graph",
    "parse_nested",
    "DEFAULT_MAX_DIM",
]

DEFAULT_MAX_DIM = 6

FreeDims = Optional[tuple[int, ...]]


class ShapeParseError(ValueError):
    """Nested-list text that does not describe a polytope."""


def _face(dim: int, free: tuple[int, ...]) -> list[int]:
    full = (1 << dim) - 1
    fixed = full & ~sum(1 << k for k in free)
    return [v for v in range(1 << dim) if v & fixed == fixed]


@dataclass(frozen=True)
class PolytopeShape:
    dim: int
    deletion: FreeDims = None
    addition: FreeDims = None

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be >= 0")
        for name in ("deletion", "addition"):
            free = getattr(self, name)
            if free is None:
                continue
            free = tuple(sorted(set(free)))
            if any(not 0 <= k < self.dim for k in free):
                raise ValueError(f"{name} dimensions {free} outside 0..{self.dim - 1}")
            object.__setattr__(self, name, free)

    @property
    def is_regular(self) -> bool:
        return self.deletion is None and self.addition is None

    @property
    def alterations(self) -> int:
        """Number of alteration faces (0, 1 or 2)."""
        return (self.deletion is not None) + (self.addition is not None)

    def is_admissible(self) -> bool:
        """Alteration faces of dimension at most ``dim - 2``."""
        return all(free is None or len(free) <= self.dim - 2
                   for free in (self.deletion, self.addition))

    @cached_property
    def deleted(self) -> frozenset[int]:
        if self.deletion is None:
            return frozenset()
        return frozenset(_face(self.dim, self.deletion))

    @cached_property
    def attached(self) -> frozenset[int]:
        """Surviving base vertices that carry an added vertex."""
        if self.addition is None:
            return frozenset()
        return frozenset(_face(self.dim, self.addition)) - self.deleted

    @property
    def vertex_count(self) -> int:
        return (1 << self.dim) - len(self.deleted) + len(self.attached)

    def nested(self) -> str:
        """Nested-list text, e.g. ``[[1,1],[1]]`` or ``[1,(1,1)]``."""
        return to_nested_representation(self)

    def __str__(self) -> str:
        return self.nested()


def to_nested_representation(shape: PolytopeShape) -> str:
    deleted, attached = shape.deleted, shape.attached

    def rec(level: int, base: int) -> Optional[str]:
        if level < 0:
            if base in deleted:
                return None
            return "(1,1)" if base in attached else "1"
        parts = [rec(level - 1, base), rec(level - 1, base | (1 << level))]
        parts = [p for p in parts if p is not None]
        return "[" + ",".join(parts) + "]" if parts else None

    return rec(shape.dim - 1, 0)


def parse_nested(text: str) -> PolytopeShape:
    """Rebuild a shape from its nested-list text.

    When an addition face is partly hidden by the deletion, the smallest free
    set consistent with the visible added vertices is returned; the vertex
    graph is the same either way.
    """
    try:
        tree = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError) as err:
        raise ShapeParseError(f"not a nested list: {text!r}") from err

    depth = 0
    node = tree
    while isinstance(node, list):
        if not node:
            raise ShapeParseError(f"empty level in {text!r}")
        depth += 1
        node = node[0]
    surviving: set[int] = set()
    attached: set[int] = set()

    def walk(node, level: int, base: int):
        if level < 0:
            if node == 1:
                surviving.add(base)
            elif node == (1, 1):
                surviving.add(base)
                attached.add(base)
            else:
                raise ShapeParseError(f"bad leaf {node!r} in {text!r}")
            return
        if not isinstance(node, list) or not 1 <= len(node) <= 2:
            raise ShapeParseError(f"bad level {node!r} in {text!r}")
        for bit, child in enumerate(node):
            walk(child, level - 1, base | (bit << level))

    walk(tree, depth - 1, 0)
    dim = depth
    everything = set(range(1 << dim))
    deleted = everything - surviving
    deletion = None
    if deleted:
        deletion = tuple(k for k in range(dim) if any(not v >> k & 1 for v in deleted))
    addition = None
    if attached:
        addition = tuple(k for k in range(dim) if any(not v >> k & 1 for v in attached))
    shape = PolytopeShape(dim, deletion, addition)
    if shape.deleted != frozenset(deleted) or shape.attached != frozenset(attached):
        raise ShapeParseError(f"alterations in {text!r} are not faces through the last vertex")
    return shape


@dataclass(frozen=True)
class Vertex:
    position: int  # 0-based chronological position
    kind: str  # "base" or "added"
    coords: int  # bit vector of the base vertex (attachment vertex for added ones)


class VertexGraph:
    """Chronological layout of a shape, with antecedents, successors and pivots.

    Positions are 0-based here; reports add one to match ``a_1 .. a_m``.
    ``antecedents[i]`` and ``pivots[i]`` are aligned tuples: ``pivots[i][k]`` is
    the pivot of vertex ``i`` related to antecedent ``antecedents[i][k]``.
    """

    def __init__(self, shape: PolytopeShape):
        self.shape = shape
        vertices: list[Vertex] = []
        base_pos: dict[int, int] = {}
        added_pos: dict[int, int] = {}
        for v in range(1 << shape.dim):
            if v in shape.deleted:
                continue
            base_pos[v] = len(vertices)
            vertices.append(Vertex(len(vertices), "base", v))
            if v in shape.attached:
                added_pos[v] = len(vertices)
                vertices.append(Vertex(len(vertices), "added", v))
        self.vertices = tuple(vertices)
        primer = base_pos[0]

        ants: list[list[tuple[int, int]]] = [[] for _ in vertices]
        for vertex in vertices:
            v, i = vertex.coords, vertex.position
            if vertex.kind == "base":
                for k in range(shape.dim):
                    if v >> k & 1:
                        ants[i].append((base_pos[v ^ (1 << k)], base_pos[1 << k]))
            else:
                ants[i].append((base_pos[v], primer))
                for k in shape.addition or ():
                    if v >> k & 1 and (v ^ (1 << k)) in added_pos:
                        ants[i].append((added_pos[v ^ (1 << k)], base_pos[1 << k]))
            ants[i].sort()

        self.antecedents = tuple(tuple(a for a, _ in lst) for lst in ants)
        self.pivots = tuple(tuple(p for _, p in lst) for lst in ants)
        succ: list[list[tuple[int, int]]] = [[] for _ in vertices]
        for i, lst in enumerate(ants):
            for a, p in lst:
                succ[a].append((i, p))
        self.successors = tuple(tuple(s for s, _ in sorted(lst)) for lst in succ)
        # pivot of successor s related to this vertex
        self.successor_pivots = tuple(tuple(p for _, p in sorted(lst)) for lst in succ)

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"VertexGraph({self.shape.nested()})"

    def pivot(self, i: int, j: int) -> int:
        """Pivot of vertex ``i`` related to its antecedent ``j``."""
        return self.pivots[i][self.antecedents[i].index(j)]

    @property
    def primers(self) -> list[int]:
        return [i for i, a in enumerate(self.antecedents) if not a]

    @property
    def under_primers(self) -> list[int]:
        return [i for i, a in enumerate(self.antecedents) if a == (0,)]


@lru_cache(maxsize=None)
def build_vertex_graph(shape: PolytopeShape) -> VertexGraph:
    return VertexGraph(shape)


def _free_sets(dim: int) -> list[FreeDims]:
    sets = [c for r in range(dim - 1) for c in itertools.combinations(range(dim), r)]
    return [None] + sorted(sets)


@lru_cache(maxsize=None)
def enumerate_shapes(size: int, max_dim: int = DEFAULT_MAX_DIM) -> tuple[PolytopeShape, ...]:
    """All admissible shapes holding ``size`` vertices, deduplicated by nested text.

    Order: dimension, then deletion set, then addition set (no alteration
    first, free sets in lexicographic order). Size 1 yields the single-vertex
    shape of dimension 0.
    """
    if size < 1:
        return ()
    found: dict[str, PolytopeShape] = {}
    for dim in range(max_dim + 1):
        if (1 << dim) - (1 << max(dim - 2, 0)) > size:
            break
        for deletion in _free_sets(dim):
            for addition in _free_sets(dim):
                shape = PolytopeShape(dim, deletion, addition)
                if shape.vertex_count == size:
                    found.setdefault(shape.nested(), shape)
    return tuple(found.values())
