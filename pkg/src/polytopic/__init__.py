"""Polytopic analysis of music: structural segmentation by compression on polytopes."""

from .chords import ALL_CHORDS, Chord, Mode, parse_chord_label, parse_sequence, preprocess_sequence
from .cost import CostConfig, passage_cost, polytope_cost, segment_cost, square_cost
from .evaluation import evaluate_corpus, match_frontiers, score
from .relations import Relation, RelationSystem, get_system
from .segmentation import SegmentationConfig, SegmentationResult, corpus_run, segment_song
from .shapes import PolytopeShape, build_vertex_graph, enumerate_shapes, parse_nested
from .songio import SongFile, load_song

__version__ = "0.1.0"

__all__ = [
    "ALL_CHORDS",
    "Chord",
    "Mode",
    "parse_chord_label",
    "parse_sequence",
    "preprocess_sequence",
    "CostConfig",
    "passage_cost",
    "polytope_cost",
    "segment_cost",
    "square_cost",
    "evaluate_corpus",
    "match_frontiers",
    "score",
    "Relation",
    "RelationSystem",
    "get_system",
    "SegmentationConfig",
    "SegmentationResult",
    "corpus_run",
    "segment_song",
    "PolytopeShape",
    "build_vertex_graph",
    "enumerate_shapes",
    "parse_nested",
    "SongFile",
    "load_song",
]
