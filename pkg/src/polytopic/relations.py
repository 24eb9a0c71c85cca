"""Relation groups acting simply transitively on the 24 triads.

Two systems are provided:

* ``triad_circle``: chords laid on a 24-step circle where one clockwise step
  takes the third and fifth of a chord as root and third of the next one
  (C -> Em -> G -> Bm ...). A relation is a signed step count in -11..12.
* ``tonnetz``: the group generated by the neo-Riemannian P, L and R
  transformations. Elements are identified by their image of C major and
  displayed as their shortest PLR word.

Relations are stored internally as integer codes 0..23 so that the cost engine
can work on plain lookup tables.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .chords import ALL_CHORDS, Chord, Mode

__all__ = [
    "Relation",
    "RelationSystem",
    "SystemMismatchError",
    "get_system",
    "triad_circle_order",
    "plr_transform",
    "SYSTEM_NAMES",
]

TRIAD_CIRCLE = "triad_circle"
TONNETZ = "tonnetz"
SYSTEM_NAMES = (TRIAD_CIRCLE, TONNETZ)
_ALIASES = {"triad": TRIAD_CIRCLE, "triad_circle": TRIAD_CIRCLE, "circle": TRIAD_CIRCLE,
            "tonnetz": TONNETZ, "plr": TONNETZ}

C_MAJOR = Chord(0, Mode.MAJOR)


class SystemMismatchError(ValueError):
    """A relation was used with a system it does not belong to."""


@dataclass(frozen=True)
class Relation:
    """One group element. ``code`` is the internal 0..23 identifier."""

    system: str
    code: int

    @property
    def value(self):
        """Signed step count (triad circle) or canonical PLR word (tonnetz)."""
        return get_system(self.system).render(self)

    def __str__(self) -> str:
        return str(self.value)


def triad_circle_order() -> list[Chord]:
    """Chords in clockwise circle order, starting from C major."""
    order = [C_MAJOR]
    while len(order) < 24:
        prev = order[-1]
        third = 4 if prev.mode is Mode.MAJOR else 3
        root = (prev.pitch_class + third) % 12
        # the new third is the old fifth, 7 semitones above the old root
        interval = (prev.pitch_class + 7 - root) % 12
        mode = Mode.MAJOR if interval == 4 else Mode.MINOR
        order.append(Chord(root, mode))
    return order


def plr_transform(letter: str, chord: Chord) -> Chord:
    """Apply one of the P, L, R involutions to a triad."""
    r = chord.pitch_class
    major = chord.mode is Mode.MAJOR
    if letter == "P":
        return Chord(r, Mode.MINOR if major else Mode.MAJOR)
    if letter == "R":
        return Chord((r + 9) % 12, Mode.MINOR) if major else Chord((r + 3) % 12, Mode.MAJOR)
    if letter == "L":
        return Chord((r + 4) % 12, Mode.MINOR) if major else Chord((r + 8) % 12, Mode.MAJOR)
    raise ValueError(f"unknown transformation {letter!r}")


class RelationSystem:
    """Precomputed tables for one relation group.

    ``action[f, a]`` is the chord index reached by applying relation code ``f``
    to chord index ``a``; ``between[a, b]`` is the code of the relation taking
    ``a`` to ``b``; ``compose_table[f, g]`` is the code of "g then f".
    """

    def __init__(self, name: str, action: np.ndarray, identity: int, labels: list):
        self.name = name
        self.action = action
        self.action.setflags(write=False)
        self.identity_code = identity
        self._labels = labels
        between = np.full((24, 24), -1, dtype=np.int64)
        for f in range(24):
            between[np.arange(24), action[f]] = f
        if (between < 0).any():
            raise ValueError(f"{name}: action is not simply transitive")
        self.between = between
        self.between.setflags(write=False)
        compose = np.empty((24, 24), dtype=np.int64)
        ref = C_MAJOR.index
        for f in range(24):
            for g in range(24):
                compose[f, g] = between[ref, action[f, action[g, ref]]]
        self.compose_table = compose
        self.compose_table.setflags(write=False)

    def __repr__(self) -> str:
        return f"RelationSystem({self.name!r})"

    def _check(self, f: Relation) -> int:
        if f.system != self.name:
            raise SystemMismatchError(f"relation from {f.system!r} used with {self.name!r}")
        return f.code

    def relation(self, code: int) -> Relation:
        return Relation(self.name, int(code))

    @property
    def identity(self) -> Relation:
        return self.relation(self.identity_code)

    def relations(self) -> list[Relation]:
        return [self.relation(c) for c in range(24)]

    def relation_between(self, a: Chord, b: Chord) -> Relation:
        return self.relation(self.between[a.index, b.index])

    def apply(self, f: Relation, a: Chord) -> Chord:
        return ALL_CHORDS[self.action[self._check(f), a.index]]

    def compose(self, f: Relation, g: Relation) -> Relation:
        """Relation equal to applying ``g`` first, then ``f``."""
        return self.relation(self.compose_table[self._check(f), self._check(g)])

    def is_identity(self, f: Relation) -> bool:
        return self._check(f) == self.identity_code

    def render(self, f: Relation):
        return self._labels[self._check(f)]

    def parse(self, text: str | int) -> Relation:
        """Inverse of :meth:`render`."""
        for code, label in enumerate(self._labels):
            if str(label) == str(text):
                return self.relation(code)
        if self.name == TONNETZ:
            # any PLR word, not only the canonical one
            chord = C_MAJOR
            for letter in str(text):
                chord = plr_transform(letter.upper(), chord)
            return self.relation(self.between[C_MAJOR.index, chord.index])
        step = int(text) % 24
        return self.relation(step)


def _build_triad_circle() -> RelationSystem:
    order = triad_circle_order()
    position = {c.index: i for i, c in enumerate(order)}
    action = np.empty((24, 24), dtype=np.int64)
    for step in range(24):
        for chord in ALL_CHORDS:
            action[step, chord.index] = order[(position[chord.index] + step) % 24].index
    labels = [s if s <= 12 else s - 24 for s in range(24)]
    return RelationSystem(TRIAD_CIRCLE, action, 0, labels)


def _permutation(letter: str) -> tuple[int, ...]:
    return tuple(plr_transform(letter, c).index for c in ALL_CHORDS)


def _build_tonnetz() -> RelationSystem:
    generators = {letter: _permutation(letter) for letter in "PLR"}
    identity = tuple(range(24))
    # breadth-first search over words; letters are applied left to right and
    # expanded in P < L < R order so the first word reaching an element is the
    # shortest and lexicographically least one
    words = {identity: ""}
    queue = deque([identity])
    while queue:
        perm = queue.popleft()
        for letter in "PLR":
            gen = generators[letter]
            nxt = tuple(gen[perm[x]] for x in range(24))
            if nxt not in words:
                words[nxt] = words[perm] + letter
                queue.append(nxt)
    if len(words) != 24:
        raise RuntimeError(f"PLR group has {len(words)} elements, expected 24")
    action = np.empty((24, 24), dtype=np.int64)
    labels: list = [None] * 24
    ref = C_MAJOR.index
    for perm, word in words.items():
        code = perm[ref]
        action[code] = perm
        labels[code] = word
    return RelationSystem(TONNETZ, action, ref, labels)


@lru_cache(maxsize=None)
def get_system(name: str) -> RelationSystem:
    """Return the (shared, immutable) relation system called ``name``."""
    try:
        key = _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown relation system {name!r}; choose from {SYSTEM_NAMES}") from None
    if key != name:
        return get_system(key)
    return _build_triad_circle() if key == TRIAD_CIRCLE else _build_tonnetz()
