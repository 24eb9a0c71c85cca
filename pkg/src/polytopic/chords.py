"""The 24 major/minor triads, chord label parsing and silence handling."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "Mode",
    "Chord",
    "SILENCE",
    "Silence",
    "LabelParseError",
    "EmptyContentError",
    "parse_chord_label",
    "preprocess_sequence",
    "parse_sequence",
    "ALL_CHORDS",
]

PITCH_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
_NATURALS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
_MAJOR_SUFFIXES = ("", "maj", ":maj")
_MINOR_SUFFIXES = ("m", "min", ":min")


class LabelParseError(ValueError):
    """A chord label that does not belong to the triad grammar."""

    def __init__(self, text: str, position: int, reason: str = "unrecognised label"):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"{reason} in {text!r} at position {position}")


class EmptyContentError(ValueError):
    """Raised when a song holds no chord at all."""


class Mode(enum.Enum):
    MAJOR = "major"
    MINOR = "minor"


@dataclass(frozen=True)
class Chord:
    pitch_class: int
    mode: Mode = Mode.MAJOR

    def __post_init__(self):
        if not 0 <= self.pitch_class < 12:
            raise ValueError(f"pitch class out of range: {self.pitch_class}")

    @property
    def index(self) -> int:
        return self.pitch_class + 12 * (self.mode is Mode.MINOR)

    @classmethod
    def from_index(cls, index: int) -> "Chord":
        if not 0 <= index < 24:
            raise ValueError(f"chord index out of range: {index}")
        return cls(index % 12, Mode.MINOR if index >= 12 else Mode.MAJOR)

    def render(self) -> str:
        return PITCH_NAMES[self.pitch_class] + ("m" if self.mode is Mode.MINOR else "")

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Chord({self.render()})"


class Silence:
    """Parse-level marker for a beat without chord ("N")."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "N"


SILENCE = Silence()
Token = Union[Chord, Silence]

ALL_CHORDS = tuple(Chord.from_index(i) for i in range(24))


def parse_chord_label(text: str) -> Token:
    """Parse a chord label such as ``"C"``, ``"Am"``, ``"Db:min"`` or ``"N"``.

    Enharmonic spellings are merged (``Db`` and ``C#`` give the same chord).
    Anything outside major/minor triads raises :class:`LabelParseError`.
    """
    if not text:
        raise LabelParseError(text, 0, "empty label")
    if text.upper() == "N":
        return SILENCE
    root = text[0].upper()
    if root not in _NATURALS:
        raise LabelParseError(text, 0, "unknown root")
    pc = _NATURALS[root]
    pos = 1
    if pos < len(text) and text[pos] in "#b":
        pc = (pc + (1 if text[pos] == "#" else -1)) % 12
        pos += 1
    suffix = text[pos:]
    if suffix in _MAJOR_SUFFIXES:
        return Chord(pc, Mode.MAJOR)
    if suffix in _MINOR_SUFFIXES:
        return Chord(pc, Mode.MINOR)
    raise LabelParseError(text, pos, "unknown chord quality")


def preprocess_sequence(tokens: Sequence[Token]) -> list[Chord]:
    """Replace silences by the previous chord (or the first chord for a leading run)."""
    first = next((t for t in tokens if isinstance(t, Chord)), None)
    if first is None:
        raise EmptyContentError("sequence holds no chord")
    out = []
    current = first
    for tok in tokens:
        if isinstance(tok, Chord):
            current = tok
        out.append(current)
    return out


def parse_sequence(labels: Iterable[str]) -> list[Chord]:
    """Parse and preprocess a list of labels in one go."""
    tokens = []
    for i, label in enumerate(labels):
        try:
            tokens.append(parse_chord_label(label.strip()))
        except LabelParseError as err:
            raise LabelParseError(err.text, err.position, f"beat {i + 1}: {err.reason}") from None
    return preprocess_sequence(tokens)
