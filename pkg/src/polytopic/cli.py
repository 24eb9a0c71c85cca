"""Command line entry point: ``polytopic <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .chords import EmptyContentError, LabelParseError, parse_sequence
from .cost import CostConfig, PassageLengthError, passage_cost, polytope_cost, regularity_penalty, alteration_penalty
from .evaluation import DEFAULT_TOLERANCES, evaluate_corpus
from .relations import get_system
from .segmentation import InfeasibleSegmentationError, SegmentationConfig, corpus_run, segment_song
from .shapes import DEFAULT_MAX_DIM, ShapeParseError, enumerate_shapes, parse_nested
from .songio import SONG_SUFFIXES, SongFile, SongFormatError, load_reference, load_song, load_songs

logger = logging.getLogger("polytopic")

_HANDLED = (LabelParseError, EmptyContentError, SongFormatError, ShapeParseError, PassageLengthError,
            InfeasibleSegmentationError, FileNotFoundError, ValueError)


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _write(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_model_args(p: argparse.ArgumentParser):
    p.add_argument("--relations", default="triad", choices=["triad", "triad_circle", "tonnetz"],
                   help="relation system (default: triad circle)")
    p.add_argument("--pa", type=float, default=3.0, help="alteration penalty (default 3)")
    p.add_argument("--pr", type=float, default=0.1, help="size regularity penalty (default 0.1)")
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--max-size", type=int, default=40)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM, help="largest hypercube dimension")


def _seg_config(args) -> SegmentationConfig:
    cost = CostConfig(relations=get_system(args.relations).name, pa=args.pa, pr=args.pr, max_dim=args.max_dim)
    return SegmentationConfig(cost, args.min_size, args.max_size)


def _config_dict(config: SegmentationConfig) -> dict:
    c = config.cost
    return {"relations": c.relations, "pa": c.pa, "pr": c.pr, "target_size": c.target_size,
            "max_dim": c.max_dim, "min_size": config.min_size, "max_size": config.max_size}


def _parse_tolerances(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance list {text!r}") from None
    if not values or min(values) < 0:
        raise argparse.ArgumentTypeError(f"bad tolerance list {text!r}")
    return values


def cmd_segment(args) -> int:
    song = load_song(args.song)
    config = _seg_config(args)
    result = segment_song(song.chords, config, song.id)
    data = result.to_dict()
    data["beats"] = len(song)
    data["silences_replaced"] = song.silences_replaced
    data["config"] = _config_dict(config)
    _write(_dump(data), args.out)
    if args.figure:
        from .plotting import plot_segmentation
        plot_segmentation(result, [c.index for c in song.chords], args.figure, reference=song.frontiers)
    return 0


def _find_reference(refs: Path, song: SongFile) -> list[int]:
    stems = [Path(song.source).stem] if song.source else []
    stems.append(song.id)
    for stem in stems:
        for suffix in (".json", ".txt", ".csv", ".lab"):
            candidate = refs / f"{stem}{suffix}"
            if candidate.exists():
                return load_reference(candidate)
    raise SongFormatError(f"no reference for song {song.id!r} in {refs}")


def cmd_evaluate_corpus(args) -> int:
    songs = load_songs(args.directory)
    if args.refs == "inline":
        missing = [s.id for s in songs if s.frontiers is None]
        if missing:
            raise SongFormatError(f"songs without inline frontiers: {missing}")
        references = [s.frontiers for s in songs]
    else:
        references = [_find_reference(Path(args.refs), s) for s in songs]
    config = _seg_config(args)
    results = corpus_run([s.chords for s in songs], config, jobs=args.jobs, ids=[s.id for s in songs])
    failed = {s.id: str(r) for s, r in zip(songs, results) if isinstance(r, Exception)}
    ok = [(s, r, ref) for s, r, ref in zip(songs, results, references) if not isinstance(r, Exception)]
    report = evaluate_corpus([r.frontiers for _, r, _ in ok], [ref for _, _, ref in ok],
                             args.tolerance, ids=[s.id for s, _, _ in ok])
    sys.stdout.write(report.to_table() + "\n")
    if args.out:
        data = report.to_dict()
        data["config"] = _config_dict(config)
        data["failed"] = failed
        data["estimations"] = {s.id: r.to_dict() for s, r, _ in ok}
        Path(args.out).write_text(_dump(data), encoding="utf-8")
    if args.tsv:
        Path(args.tsv).write_text("\n".join("\t".join(row) for row in report.rows()) + "\n", encoding="utf-8")
    if args.figures:
        from .plotting import plot_corpus_scores, plot_segmentation
        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        plot_corpus_scores(report, figdir / "corpus_f1.png")
        for song, result, ref in ok:
            plot_segmentation(result, [c.index for c in song.chords], figdir / f"{song.id}.png", reference=ref)
    for song_id, message in failed.items():
        sys.stderr.write(_dump({"error": "SongFailed", "song": song_id, "message": message}))
    return 1 if failed else 0


def _load_passage(text: str):
    path = Path(text)
    if path.suffix.lower() in SONG_SUFFIXES and path.exists():
        return load_song(path).chords
    return parse_sequence(text.replace(",", " ").split())


def cmd_cost(args) -> int:
    chords = _load_passage(args.passage)
    config = CostConfig(relations=get_system(args.relations).name, pa=args.pa, pr=args.pr, max_dim=args.max_dim)
    if args.shape:
        shape = parse_nested(args.shape)
        breakdown = polytope_cost(chords, shape, config.system)
        breakdown.alteration_penalty = alteration_penalty(shape, config)
        cost = breakdown.cost
    else:
        cost, breakdown = passage_cost(chords, config)
    data = {"passage": [c.render() for c in chords], "size": len(chords), "relations": config.relations}
    if breakdown is None:
        data.update({"cost": None, "message": f"no polytope holds {len(chords)} vertices"})
        sys.stdout.write(_dump(data))
        return 1
    data.update(breakdown.to_dict())
    data["cost"] = cost
    data["segment_cost"] = cost + regularity_penalty(len(chords), config)
    sys.stdout.write(_dump(data))
    return 0


def cmd_enumerate_shapes(args) -> int:
    for shape in enumerate_shapes(args.size, args.max_dim):
        sys.stdout.write(shape.nested() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polytopic",
                                     description="Polytopic structural segmentation of beat-wise chord sequences.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one song and print the JSON result")
    p.add_argument("song", help="song file (.json, .csv, .txt)")
    _add_model_args(p)
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.add_argument("--figure", help="also save a segmentation plot (e.g. song.png)")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("evaluate-corpus", help="segment a directory of songs and score the frontiers")
    p.add_argument("directory")
    p.add_argument("--refs", required=True, help="directory of reference frontier files, or 'inline'")
    p.add_argument("--tolerance", type=_parse_tolerances, default=DEFAULT_TOLERANCES,
                   help="comma-separated tolerances in beats (default 0,3)")
    p.add_argument("--jobs", type=int, default=1)
    _add_model_args(p)
    p.add_argument("--out", help="JSON report path")
    p.add_argument("--tsv", help="tab-separated score table path")
    p.add_argument("--figures", help="directory for per-song and corpus figures")
    p.set_defaults(func=cmd_evaluate_corpus)

    p = sub.add_parser("cost", help="cost breakdown of a passage")
    p.add_argument("passage", help="song file or chord list such as 'C,G,Am,F'")
    p.add_argument("--shape", help="nested-list polytope, e.g. '[[1,1],[1,1]]' (default: best shape)")
    p.add_argument("--relations", default="triad", choices=["triad", "triad_circle", "tonnetz"])
    p.add_argument("--pa", type=float, default=3.0)
    p.add_argument("--pr", type=float, default=0.1)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("enumerate-shapes", help="list every polytope with the given vertex count")
    p.add_argument("size", type=int)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.set_defaults(func=cmd_enumerate_shapes)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _HANDLED as err:
        sys.stderr.write(_dump({"error": type(err).__name__, "message": str(err)}))
        return 1


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
