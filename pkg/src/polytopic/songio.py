"""Reading songs and reference frontiers from disk.

Two song formats are accepted:

* CSV / plain text: one chord label per line, line ``k`` is beat ``k``; any
  further comma- or tab-separated column is ignored.
* JSON: ``{"id": "...", "beats": ["C", "N", ...], "frontiers": [33, 65]}``,
  ``frontiers`` optional.

Frontiers are 1-based beat indices of segment starts, beat 1 excluded.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .chords import Chord, EmptyContentError, LabelParseError, Silence, parse_chord_label, preprocess_sequence

__all__ = [
    "SongFile",
    "SongFormatError",
    "load_song",
    "load_songs",
    "song_from_dict",
    "load_reference",
    "frontiers_from_intervals",
    "validate_frontiers",
    "SONG_SUFFIXES",
]

SONG_SUFFIXES = (".json", ".csv", ".txt", ".lab")


class SongFormatError(ValueError):
    """A song or reference file that cannot be read."""


@dataclass
class SongFile:
    id: str
    labels: list[str]
    chords: list[Chord]
    frontiers: Optional[list[int]] = None
    silences_replaced: int = 0
    source: Optional[str] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.chords)

    def to_dict(self) -> dict:
        out = {"id": self.id, "beats": list(self.labels)}
        if self.frontiers is not None:
            out["frontiers"] = list(self.frontiers)
        return out


def validate_frontiers(frontiers: Sequence[int], length: int) -> list[int]:
    frontiers = list(frontiers)
    if any(not isinstance(f, int) or isinstance(f, bool) for f in frontiers):
        raise SongFormatError(f"frontiers must be integers: {frontiers}")
    if any(b <= a for a, b in zip(frontiers, frontiers[1:])):
        raise SongFormatError(f"frontiers must be strictly increasing: {frontiers}")
    if frontiers and (frontiers[0] <= 1 or frontiers[-1] > length):
        raise SongFormatError(f"frontiers must lie in (1, {length}]: {frontiers}")
    return frontiers


def _build(song_id: str, labels: list[str], frontiers, where: str) -> SongFile:
    if not labels:
        raise EmptyContentError(f"{where}: no beats")
    tokens = []
    for beat, label in enumerate(labels, start=1):
        try:
            tokens.append(parse_chord_label(label.strip()))
        except LabelParseError as err:
            raise LabelParseError(err.text, err.position, f"{where}, beat {beat}: {err.reason}") from None
    try:
        chords = preprocess_sequence(tokens)
    except EmptyContentError:
        raise EmptyContentError(f"{where}: only silences") from None
    if frontiers is not None:
        frontiers = validate_frontiers(frontiers, len(chords))
    silences = sum(isinstance(t, Silence) for t in tokens)
    return SongFile(song_id, labels, chords, frontiers, silences, where)


def song_from_dict(data: dict, default_id: str = "song", where: str = "<json>") -> SongFile:
    if not isinstance(data, dict) or "beats" not in data:
        raise SongFormatError(f"{where}: expected an object with a 'beats' list")
    labels = data["beats"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SongFormatError(f"{where}: 'beats' must be a list of strings")
    return _build(str(data.get("id", default_id)), labels, data.get("frontiers"), where)


def _read_csv(text: str) -> list[str]:
    dialect = "excel-tab" if "\t" in text else "excel"
    labels = []
    for row in csv.reader(io.StringIO(text), dialect=dialect):
        labels.append(row[0] if row else "")
    while labels and not labels[-1].strip():
        labels.pop()
    return labels


def load_song(path: str | Path) -> SongFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise SongFormatError(f"{path}: invalid JSON ({err})") from err
        return song_from_dict(data, path.stem, str(path))
    return _build(path.stem, _read_csv(text), None, str(path))


def load_songs(directory: str | Path) -> list[SongFile]:
    """All songs of a directory, sorted by file name."""
    directory = Path(directory)
    if not directory.is_dir():
        raise SongFormatError(f"{directory} is not a directory")
    paths = sorted(p for p in directory.iterdir() if p.suffix.lower() in SONG_SUFFIXES)
    return [load_song(p) for p in paths]


def load_reference(path: str | Path) -> list[int]:
    """Reference frontiers from JSON (a list, or an object with ``frontiers``) or whitespace-separated text."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("frontiers")
        if not isinstance(data, list):
            raise SongFormatError(f"{path}: no frontier list")
        values = data
    else:
        try:
            values = [int(tok) for tok in text.replace(",", " ").split()]
        except ValueError as err:
            raise SongFormatError(f"{path}: {err}") from err
    if any(b <= a for a, b in zip(values, values[1:])) or any(v <= 1 for v in values):
        raise SongFormatError(f"{path}: frontiers must be strictly increasing and > 1")
    return values


def frontiers_from_intervals(intervals: Sequence[Sequence[int]], one_based: bool = True) -> list[int]:
    """Convert ``[start, end]`` segment intervals to frontiers.

    Assumes contiguous, sorted segments; the first start is the song start and
    is dropped. With ``one_based=False`` starts are shifted by one.
    """
    starts = [int(iv[0]) + (0 if one_based else 1) for iv in intervals]
    if any(b <= a for a, b in zip(starts, starts[1:])):
        raise SongFormatError(f"segment starts must increase: {starts}")
    return starts[1:]
